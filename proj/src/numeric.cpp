#include "hup/numeric.hpp"

#include <limits>
#include <map>
#include <mutex>

namespace hup {

const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights = 2.0 * es.eigenvectors().row(0).array().square().transpose();
    // polish nodes with a couple of Newton steps on P_n
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes[i];
        for (int it = 0; it < 3; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            x -= p1 / dp;
            if (it == 2) rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        rule.nodes[i] = x;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

double solve_bracketed(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                       double ftol, int max_iter) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (a > b) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double ta = fa, tb = fb; // true values, fa/fb get scaled by the Illinois rule
    int side = 0;
    double width_ref = b - a;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < max_iter; ++it) {
        double x;
        bool bisect = (it % 4 == 3) && (b - a) > 0.5 * width_ref;
        if (it % 4 == 3) width_ref = b - a;
        if (bisect) {
            x = 0.5 * (a + b);
        } else {
            x = (a * fb - b * fa) / (fb - fa);
            if (!(x > a && x < b)) x = 0.5 * (a + b);
        }
        double fx = f(x);
        if (fx == 0.0 || std::abs(fx) <= ftol) return x;
        if ((fx < 0) == (ta < 0)) {
            a = x;
            fa = ta = fx;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = x;
            fb = tb = fx;
            if (side == +1) fa *= 0.5;
            side = +1;
        }
        double scale = std::max({std::abs(a), std::abs(b), 1e-300});
        if (b - a <= 2.0 * eps * scale) break;
    }
    return std::abs(ta) <= std::abs(tb) ? a : b;
}

double bisect_sign(const std::function<double(double)>& f, double lo, double hi, double flo, int iters) {
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace hup
