#pragma once

#include "hup/chordmap.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hup {

using CircleFunction = std::function<double(double)>; // s in [0,1) -> [0,1)

// Point on the real line stored as integer turns plus a fraction in [0,1).
struct LiftPoint {
    std::int64_t turns = 0;
    double frac = 0.0;
    double value() const { return static_cast<double>(turns) + frac; }
};

class CircleMapLift {
public:
    // degree-one lift of a circle map; the reference displacement is unwrapped on `grid` points
    explicit CircleMapLift(CircleFunction map, int grid = 4096);

    double operator()(double x) const;
    double circle(double s) const { return map_(s); }
    LiftPoint step(LiftPoint p) const;
    LiftPoint iterate(double x0, std::int64_t n) const;
    // min/max of lift(x) - x on the grid
    std::pair<double, double> displacement_bounds() const;

    const std::optional<Curve>& curve() const { return curve_; }
    void set_curve(Curve c) { curve_ = std::move(c); }

private:
    std::int64_t turn_offset(double y, double image) const;

    CircleFunction map_;
    std::vector<double> ref_; // displacement on i/N, i = 0..N
    std::optional<Curve> curve_;
};

// Phi = map2 o map1 on a closed curve
CircleMapLift compose_and_lift(const ChordMap& map1, const ChordMap& map2);

struct Convergent {
    long p = 0;
    long q = 1;
};

struct PeriodicOrbit {
    int period = 0;
    long rotation = 0;          // p of p/q (lift turns per period)
    std::vector<double> points; // orbit points in [0,1)
    bool everywhere = false;    // Phi^q - R_p vanishes on the whole grid
};

struct RotationEstimate {
    double value = 0.0;      // in [0,1)
    double lift_value = 0.0; // (lift^n(x0) - x0) / n
    std::int64_t n = 0;
    double a = 0.0, b = 0.0; // displacement bounds
    std::vector<Convergent> convergents;
    std::optional<Convergent> rational_candidate;
    bool periodic_orbit_found = false;
    std::optional<PeriodicOrbit> orbit;
    int period_cap = 64;
};

std::vector<Convergent> convergents(double x, long max_q);
RotationEstimate rotation_number(const CircleMapLift& lift, double x0, std::int64_t n, int period_cap = 64);

// fixed points of lift^q - p for p/q close to the rotation estimate
std::optional<PeriodicOrbit> detect_periodic_orbit(const CircleMapLift& lift, int max_period, double tol,
                                                   std::optional<double> rho_hint = std::nullopt);
// circle maps of either orientation; roots within 1e-6 of an excluded point are skipped
std::optional<PeriodicOrbit> detect_periodic_orbit(const CircleFunction& map, int max_period, double tol,
                                                   const std::vector<double>& excluded = {});

struct SigmaSequence {
    Angle theta1, theta2;
    std::vector<double> sigma;
    int direction = 0;     // +1 strictly increasing, -1 strictly decreasing, 0 neither
    bool left_window = false;
    double tangency1 = 0.0;
    double tangency2 = 0.0;
};

SigmaSequence sigma_sequence(const Curve& curve, Angle theta1, Angle theta2, std::optional<double> sigma0, int n);

// An interval map: either a degree-one lift on the line or a partial map of a parameter interval
struct IntervalMap {
    std::function<double(double)> f;
    bool lift = false;
};

IntervalMap as_interval_map(const CircleMapLift& lift);
// Phi = map2 o map1 as a partial map (throws InI0 / OutOfDomain off its domain)
IntervalMap as_interval_map(const ChordMap& map1, const ChordMap& map2);

struct IntervalCertificate {
    std::string kind; // wandering | attractive | periodic
    double lo = 0.0, hi = 0.0;
    long horizon = 0;  // steps actually checked
    int period = 0;    // k for attractive
    bool infinite_horizon = false;
    std::string reason; // escape | monotone-to-fixed-point | finite
    std::vector<std::pair<double, double>> orbit;
    bool monotone = true;
    std::optional<double> limit;
    bool lower_increasing = false;
    bool upper_decreasing = false;
    double final_width = 0.0;
};

IntervalCertificate certify_wandering(const IntervalMap& map, double lo, double hi, long horizon = 10000);
IntervalCertificate certify_attractive(const IntervalMap& map, double lo, double hi, int k, long n_limit = 100000);

// lifted orbit x0, F(x0), ..., F^n(x0)
std::vector<double> orbit(const CircleMapLift& lift, double x0, long n);

} // namespace hup
