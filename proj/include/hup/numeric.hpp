#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace hup {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// x mod m in [0, m)
inline double wrap(double x, double m = 1.0) {
    double r = std::fmod(x, m);
    if (r < 0) r += m;
    if (r >= m) r -= m;
    return r;
}

// Gauss-Legendre rule on [-1,1] via Golub-Welsch.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

const GaussRule& gauss_legendre(int n);

// Composite rule over [lo, hi] with `panels` equal panels.
template <class F>
auto integrate_panels(F&& f, double lo, double hi, int panels, int order = 10) {
    const GaussRule& g = gauss_legendre(order);
    using R = decltype(f(lo));
    R acc{};
    double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        double a = lo + p * h;
        double mid = a + 0.5 * h;
        for (int i = 0; i < g.nodes.size(); ++i) acc += (0.5 * h * g.weights[i]) * f(mid + 0.5 * h * g.nodes[i]);
    }
    return acc;
}

// Root of a monotone function on [lo, hi] where f(lo) and f(hi) bracket zero.
// Secant/regula-falsi steps with the Illinois fix, bisection when a step
// fails to shrink the bracket enough.
double solve_bracketed(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
                       double ftol = 0.0, int max_iter = 200);

// Plain bisection on sign change (used for critical points of projections).
double bisect_sign(const std::function<double(double)>& f, double lo, double hi, double flo, int iters = 80);

} // namespace hup
