#pragma once

#include "hup/dynamics.hpp"
#include "hup/measure.hpp"

#include <optional>
#include <vector>

namespace hup {

// T(u, v) = (u / v, 1 / v); an involution off the line v = 0
Point2 projective_map(const Point2& p);
Point2 projective_map_inverse(const Point2& p);

struct PivotPoint {
    Point2 location = Point2::Zero();
    Angle theta;

    static PivotPoint from_angle(Angle theta); // (-tan theta, 0)
};

// second intersection of the line through the pivot and alpha with the unit circle
Point2 chord_through_point_map(const PivotPoint& pivot, const Point2& alpha);

// circle map s -> (Phi~_2 o Phi~_1)(e(s)) in the angle coordinate s = arg / 2 pi; the images of the
// hyperbola chord maps under T (T(gamma(s)) = e(2 pi s) for the standard hyperbola)
CircleFunction hyperbola_transfer(Angle theta1, Angle theta2);

// max |T(gamma(Phi(s))) - Phi~(T(gamma(s)))| over samples of the hyperbola domain
double conjugation_deviation(const Curve& hyperbola, Angle theta, int samples = 1000);

struct AngleProbe {
    std::vector<double> phi; // angle of the line A1 -> alpha_k against the real axis
    bool strictly_monotone = false;
    int monotone_from = -1; // first k from which |phi_k| is strictly monotone, -1 if never
    bool two_periodic = false;
    double period2_deviation = 0.0;
};

// iterates alpha_{k+1} = Phi~_1(Phi~_2(alpha_k)) from alpha_0 = e^{i alpha0}
AngleProbe angle_monotonicity_probe(Angle theta1, Angle theta2, double alpha0, int n);

struct EllipseReduction {
    double phi1 = 0.0, phi2 = 0.0; // line angles after the push, in [0, pi)
    double predicate = 0.0;        // (phi2 - phi1) / pi mod 1
    double predicate_swapped = 0.0;
    double closed_formula = 0.0; // arcsin(b sin th2 / sqrt(a^2+b^2)) - arcsin(b sin th1 / sqrt(a^2+b^2))
    double discrepancy = 0.0;    // closed formula vs phi2 - phi1, mod pi
};

EllipseReduction ellipse_to_circle(double a, double b, Angle theta1, Angle theta2);

struct RadonSlice {
    Angle theta;
    std::vector<double> zeta;
    std::vector<cplx> values;
    int skipped = 0; // grid values within 1e-6 of a critical value
};

RadonSlice radon_projection(const Density& f, const Curve& curve, Angle theta,
                            std::optional<std::vector<double>> zeta_grid = std::nullopt);

// int slice(zeta) d zeta, integrating across the fold singularities
cplx radon_mass(const Density& f, const Curve& curve, Angle theta);

struct SliceCheck {
    Angle theta;
    std::vector<double> xi;
    std::vector<cplx> slice_side;  // 1-D transform of the Radon slice
    std::vector<cplx> direct_side; // 2-D transform along the line
    double max_discrepancy = 0.0;
};

SliceCheck fourier_slice_check(const Density& f, const Curve& curve, Angle theta, const std::vector<double>& xi_grid);

} // namespace hup
