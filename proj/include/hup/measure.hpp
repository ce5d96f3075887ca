#pragma once

#include "hup/chordmap.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hup {

using cplx = std::complex<double>;

// Density f of an absolutely continuous measure f(s) ds on a curve.
class Density {
public:
    using Fn = std::function<cplx(double)>;

    Density() = default; // the zero density

    static Density from_function(Fn f, std::vector<Interval> support, std::vector<double> breakpoints = {},
                                 std::optional<double> period = std::nullopt, std::string label = "");
    // nodes sorted; periodic grids are uniform i/N on [0,1)
    static Density from_grid(Eigen::VectorXd nodes, Eigen::VectorXcd values, std::vector<Interval> support,
                             bool periodic);

    cplx operator()(double s) const;

    bool is_zero() const { return kind_ == Kind::Zero; }
    bool is_grid() const { return kind_ == Kind::Grid; }
    const std::vector<Interval>& support() const { return support_; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::optional<double>& period() const { return period_; }
    const Eigen::VectorXd& nodes() const { return nodes_; }
    const Eigen::VectorXcd& values() const { return values_; }
    const std::string& label() const { return label_; }

    Density scaled(cplx a) const;
    // a f + b g
    static Density combine(cplx a, const Density& f, cplx b, const Density& g);
    // grid copy on n nodes strictly inside the curve domain
    Density sampled(const Curve& curve, int n = 8192) const;

private:
    enum class Kind { Zero, Function, Grid };
    Kind kind_ = Kind::Zero;
    Fn fn_;
    std::vector<Interval> support_;
    std::vector<double> breaks_;
    std::optional<double> period_;
    Eigen::VectorXd nodes_;
    Eigen::VectorXcd values_;
    bool periodic_grid_ = false;
    std::string label_;
};

// grid nodes strictly inside the domain (cell centres; i/N for closed curves)
Eigen::VectorXd domain_grid(const Curve& curve, int n);

// integral of f (or |f|) over [lo, hi] with panels split at breakpoints
cplx integrate_density(const Density& f, const Curve& curve, double lo, double hi);
double integrate_abs(const Density& f, const Curve& curve, double lo, double hi);
double l1_norm(const Density& f, const Curve& curve);

struct QuadratureResult {
    cplx value;
    double error = 0.0;
    int panels = 0;
    bool converged = true;
};

struct FourierOptions {
    double abs_tol = 1e-9;
    int max_doublings = 6;
    bool throw_on_failure = false;
};

// int f(s) exp(-i <gamma(s), xi>) ds
QuadratureResult fourier_transform(const Density& f, const Curve& curve, const Point2& xi, FourierOptions opt = {});

struct LineReport {
    Angle theta;
    double max_modulus = 0.0;
    double max_error = 0.0;
    bool converged = true;
    std::vector<double> t;
    std::vector<cplx> values;
};

struct AnnihilationReport {
    double t_lo = -50.0, t_hi = 50.0;
    int t_count = 501;
    std::vector<LineReport> lines;
};

AnnihilationReport check_annihilation(const Density& f, const Curve& curve, const std::vector<Angle>& lines,
                                      double t_lo = -50.0, double t_hi = 50.0, int t_count = 501);

// |d/ds <gamma(s), theta>|, one-sided at breakpoints
double abs_projection_speed(const Curve& curve, Angle theta, double s);

// sum over the level set of f(s) / |pi'(s)|
cplx slice_value(const Density& f, const Curve& curve, const ProjectionSplit& split, double zeta);
// projection values that are critical or come from corners
std::vector<double> critical_values(const Curve& curve, const ProjectionSplit& split);
// default zeta grid: n uniform values over the projection range
std::vector<double> default_zeta_grid(const ProjectionSplit& split, int n = 2001);

double eqfund_residual(const Density& f, const Curve& curve, Angle theta,
                       std::optional<std::vector<double>> zeta_grid = std::nullopt);

struct PropagationOptions {
    int max_layers = 64;
    bool zero_fill = false; // uncovered parts become zero instead of TilingGap
};

struct PropagationResult {
    Density density;
    std::vector<Interval> covered;
    int layers = 0;
    std::vector<std::string> warnings;
};

// extend a seed by f(Phi s) = -f(s) |pi'(Phi s)| / |pi'(s)| through the maps in turn
PropagationResult propagate_density(const Density& seed, const std::vector<Interval>& region,
                                    const std::vector<ChordMap>& maps, const Curve& curve,
                                    PropagationOptions opt = {});

// image of an interval under a chord map (parts in I0 dropped)
std::vector<Interval> chord_image(const ChordMap& map, const Interval& J);

struct CounterexampleSpec {
    std::string kind = "circle_rational"; // circle_rational | hyperbola_perpendicular | hyperbola_conjugate | generic_periodic
    int q = 2;
    std::string profile = "sin"; // sin | bump
    double theta1 = 3.0 * kPi / 8.0;
    double theta2 = 0.0;                  // generic_periodic only
    std::optional<Curve> curve;           // generic_periodic only
    std::optional<double> x0;             // generic_periodic bump centre
    double window = 50.0;                 // hyperbola truncation
};

struct Counterexample {
    std::string kind;
    Curve curve = Curve::circle();
    Angle theta1, theta2;
    Density density;
    double l1 = 0.0;
    std::vector<Interval> seed_region;
    std::vector<std::string> warnings;
    double residual1 = 0.0, residual2 = 0.0;
};

Counterexample construct_counterexample(const CounterexampleSpec& spec);

struct AnnihilatorOptions {
    int grid_size = 4096;
    int iterations = 10000;
    std::uint64_t seed = 20240611ULL;
    int modes = 6;
    double stop_ratio = 1e-7; // stop once the norm falls this far below the start
};

struct AnnihilatorResult {
    Density density;
    std::vector<double> l1_history; // entry 0 is the seed
    double residual1 = 0.0, residual2 = 0.0;
    double ratio = 0.0; // final / initial L1
    int iterations = 0;
    bool converged = false; // reached a fixed point
};

AnnihilatorResult annihilator_search(const Curve& curve, Angle theta1, Angle theta2, AnnihilatorOptions opt = {});

// relative L1 change of f under one pass P2 P1 evaluated with exact partner values
double projection_pass_change(const Density& f, const Curve& curve, Angle theta1, Angle theta2, int grid = 4096);

struct MassInvariance {
    double image = 0.0;    // int over Phi(J)
    double original = 0.0; // int over J (negated for the signed check)
};

MassInvariance mass_invariance_check(const Density& f, const ChordMap& map, const Interval& J, bool is_signed = false,
                                     double relation_tol = 1e-6);

} // namespace hup
