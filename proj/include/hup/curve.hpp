#pragma once

#include "hup/error.hpp"
#include "hup/numeric.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hup {

using Point2 = Eigen::Vector2d;

// Keeps the raw orientation; normalized() gives the line representative in [0, pi).
class Angle {
public:
    Angle() = default;
    explicit Angle(double radians) : value_(radians) {}

    double radians() const { return value_; }
    Angle normalized() const { return Angle(wrap(value_, kPi)); }
    Point2 direction() const { return Point2(std::cos(value_), std::sin(value_)); }
    Point2 perp() const { return Point2(-std::sin(value_), std::cos(value_)); }

private:
    double value_ = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = true;
    bool hi_closed = true;

    double length() const { return hi - lo; }
    bool contains(double s, double slack = 0.0) const { return s >= lo - slack && s <= hi + slack; }
};

struct ParamDomain {
    std::vector<Interval> intervals;
    std::optional<double> period;

    bool contains(double s, double slack = 1e-14) const;
    double measure() const;
};

struct PowerPsi {
    double alpha = 2.0;
    bool is_signed = false;
};
struct PolynomialPsi {
    std::vector<double> coeffs; // c0 + c1 t + c2 t^2 + ...
};
struct TabulatedPsi {
    std::vector<double> t;
    std::vector<double> y;
};
using Psi = std::variant<PowerPsi, PolynomialPsi, TabulatedPsi>;

struct GraphSpec {
    Psi psi = PowerPsi{};
    double lo = -50.0;
    double hi = 50.0;
};
struct EllipseSpec {
    double a = 1.0;
    double b = 1.0;
    Point2 center = Point2::Zero();
    double rotation = 0.0;
};
// gamma(s) = (cot 2 pi s, 1 / sin 2 pi s), truncated to |x| <= window
struct HyperbolaSpec {
    double window = 50.0;
};
struct PolygonSpec {
    std::vector<Point2> vertices;
};
struct TubeSpec {
    double theta1 = -0.4;
    double theta2 = 0.6;
};
// gamma = (1 + chi)(cos 2 pi s, sin 2 pi s), chi = eps sin(8 pi s) B(s) on (0, 1/4)
struct PerturbedCircleSpec {
    double epsilon = 0.02;
    double sharpness = 1.0;
};

using CurveSpec = std::variant<GraphSpec, EllipseSpec, HyperbolaSpec, PolygonSpec, TubeSpec, PerturbedCircleSpec>;

struct ConvexityReport {
    double standard_min = 0.0; // min of r^2 + 2 r'^2 - r r''   (derivatives in phi = 2 pi s)
    double variant_min = 0.0;  // min of r^2 + r'^2 - 2 r r''
    double chi_max = 0.0;
    int grid = 0;
};

namespace detail {
struct CurveImpl;
}

class Curve {
public:
    explicit Curve(CurveSpec spec);

    static Curve circle(double radius = 1.0) { return Curve(EllipseSpec{radius, radius, Point2::Zero(), 0.0}); }

    const CurveSpec& spec() const;
    std::string kind() const;
    const ParamDomain& domain() const;
    bool closed() const { return domain().period.has_value(); }
    int smoothness() const;

    // order 0, 1, 2; derivatives at corners throw DerivativeAtCorner
    Point2 eval(double s, int order = 0) const;
    // side = -1 left limit, +1 right limit
    Point2 eval_side(double s, int order, int side) const;
    std::pair<Point2, Point2> one_sided_derivative(double s) const;

    // parameters where the derivative may be discontinuous (sorted, inside the domain)
    const std::vector<double>& breakpoints() const;
    // breakpoints whose one-sided tangent directions differ by more than 1e-9 rad
    std::vector<double> corners() const;
    // polygon edges are the only exactly affine pieces
    bool piecewise_linear() const;

    // mod period for closed curves, identity otherwise
    double reduce(double s) const;
    bool in_domain(double s) const { return domain().contains(s); }

    // convexity data for the perturbed circle (empty for other kinds)
    std::optional<ConvexityReport> convexity() const;
    double tube_length() const; // l of the tube curve

private:
    std::shared_ptr<const detail::CurveImpl> impl_;
};

double projection(const Curve& curve, Angle theta, double s);
// derivative of the projection; side selects a one-sided value at breakpoints (0 = two-sided)
double projection_derivative(const Curve& curve, Angle theta, double s, int side = 0);

struct AngleInterval {
    double lo = 0.0;    // in [0, pi)
    double width = 0.0; // in (0, pi)
    // membership of a line direction (mod pi), open interval
    bool contains(double theta) const;
};

struct CornerCones {
    double s = 0.0;
    Point2 point = Point2::Zero();
    Point2 tangent_in = Point2::Zero();  // gamma'(0-) normalized
    Point2 tangent_out = Point2::Zero(); // gamma'(0+) normalized
    Point2 support = Point2::Zero();     // supporting-line direction u, u . b > 0
    AngleInterval cone_plus;  // directions between b = -gamma'(0-) and u
    AngleInterval cone_minus; // directions between f = gamma'(0+) and -u
    AngleInterval dual_plus;  // theta with theta^perp in C+
    AngleInterval dual_minus;
};

std::vector<CornerCones> corner_cones(const Curve& curve);
// explicit supporting-line direction at a single corner
CornerCones corner_cones_at(const Curve& curve, double s, std::optional<Point2> support_direction = std::nullopt);
// length of the admissible theta2 interval for a fixed theta1 (dual cone C-* of the corner whose C+* holds theta1)
std::optional<std::pair<CornerCones, AngleInterval>> admissible_theta2(const Curve& curve, Angle theta1);

Curve regular_polygon(int n, double radius = 1.0);

} // namespace hup
