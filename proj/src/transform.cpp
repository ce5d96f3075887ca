#include "hup/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hup {

Point2 projective_map(const Point2& p) {
    if (p.y() == 0.0) throw Error(ErrorKind::DivisionByZeroLocus, "T is undefined on v = 0");
    return Point2(p.x() / p.y(), 1.0 / p.y());
}

Point2 projective_map_inverse(const Point2& p) { return projective_map(p); }

PivotPoint PivotPoint::from_angle(Angle theta) {
    double c = std::cos(theta.radians());
    if (std::abs(c) < 1e-12) throw Error(ErrorKind::InvalidSpec, "pivot undefined for theta = pi/2 mod pi");
    return PivotPoint{Point2(-std::tan(theta.radians()), 0.0), theta};
}

Point2 chord_through_point_map(const PivotPoint& pivot, const Point2& alpha) {
    if (std::abs(alpha.norm() - 1.0) > 1e-9) throw Error(ErrorKind::OutOfDomain, "alpha must lie on the unit circle");
    const Point2& P = pivot.location;
    double pp = P.squaredNorm() - 1.0;
    if (std::abs(pp) < 1e-12) throw Error(ErrorKind::TangentLine, "pivot lies on the circle");
    Point2 d = alpha - P;
    double dd = d.squaredNorm();
    double t2 = pp / dd;
    if (std::abs(t2 - 1.0) < 1e-14) throw Error(ErrorKind::TangentLine, "line through the pivot is tangent at alpha");
    return P + t2 * d;
}

CircleFunction hyperbola_transfer(Angle theta1, Angle theta2) {
    PivotPoint a1 = PivotPoint::from_angle(theta1), a2 = PivotPoint::from_angle(theta2);
    return [a1, a2](double s) {
        Point2 e(std::cos(kTwoPi * s), std::sin(kTwoPi * s));
        Point2 b = chord_through_point_map(a2, chord_through_point_map(a1, e));
        return wrap(std::atan2(b.y(), b.x()) / kTwoPi, 1.0);
    };
}

double conjugation_deviation(const Curve& hyperbola, Angle theta, int samples) {
    if (!std::holds_alternative<HyperbolaSpec>(hyperbola.spec()))
        throw Error(ErrorKind::InvalidSpec, "conjugation identity is for the standard hyperbola");
    ChordMap m(hyperbola, theta);
    PivotPoint pv = PivotPoint::from_angle(theta);
    double worst = 0;
    const auto& ivs = hyperbola.domain().intervals;
    for (int i = 0; i < samples; ++i) {
        const Interval& iv = ivs[i % ivs.size()];
        double s = iv.lo + (iv.hi - iv.lo) * (i / static_cast<int>(ivs.size()) + 0.5) /
                               ((samples + ivs.size() - 1) / ivs.size());
        auto t = m.try_eval(s);
        if (!t) continue;
        Point2 lhs = projective_map(hyperbola.eval(*t));
        Point2 rhs = chord_through_point_map(pv, projective_map(hyperbola.eval(s)));
        worst = std::max(worst, (lhs - rhs).norm());
    }
    return worst;
}

AngleProbe angle_monotonicity_probe(Angle theta1, Angle theta2, double alpha0, int n) {
    if (n < 0) throw Error(ErrorKind::InvalidSpec, "n must be >= 0");
    PivotPoint a1 = PivotPoint::from_angle(theta1), a2 = PivotPoint::from_angle(theta2);
    AngleProbe pr;
    Point2 a(std::cos(alpha0), std::sin(alpha0));
    for (int k = 0; k <= n; ++k) {
        Point2 d = a - a1.location;
        pr.phi.push_back(std::atan(d.y() / d.x()));
        if (k < n) a = chord_through_point_map(a1, chord_through_point_map(a2, a));
    }
    const auto& phi = pr.phi;
    // longest strictly monotone tail of |phi|
    int m = static_cast<int>(phi.size());
    if (m >= 2) {
        int from = m - 2;
        int dir = std::abs(phi[m - 1]) > std::abs(phi[m - 2]) ? 1 : (std::abs(phi[m - 1]) < std::abs(phi[m - 2]) ? -1 : 0);
        if (dir != 0) {
            while (from > 0) {
                double d = std::abs(phi[from]) - std::abs(phi[from - 1]);
                if ((dir > 0 && d > 0) || (dir < 0 && d < 0)) --from;
                else break;
            }
            pr.monotone_from = from;
            pr.strictly_monotone = from == 0;
        }
    }
    for (int k = 0; k + 2 < m; ++k) pr.period2_deviation = std::max(pr.period2_deviation, std::abs(phi[k + 2] - phi[k]));
    pr.two_periodic = m >= 3 && pr.period2_deviation <= 1e-9;
    return pr;
}

EllipseReduction ellipse_to_circle(double a, double b, Angle theta1, Angle theta2) {
    if (!(b > 0) || !(a >= b) || !std::isfinite(a))
        throw Error(ErrorKind::DegenerateEllipse, "ellipse reduction needs a >= b > 0");
    // gamma = L e with L = diag(a, b); mu^(xi) on gamma equals mu^(L^T xi) on the circle
    auto push = [](const Eigen::Matrix2d& Lt, Angle th) {
        Point2 v = Lt * th.direction();
        return wrap(std::atan2(v.y(), v.x()), kPi);
    };
    EllipseReduction r;
    Eigen::Matrix2d L = Eigen::Vector2d(a, b).asDiagonal();
    r.phi1 = push(L.transpose(), theta1);
    r.phi2 = push(L.transpose(), theta2);
    r.predicate = wrap((r.phi2 - r.phi1) / kPi, 1.0);
    Eigen::Matrix2d Ls = Eigen::Vector2d(a / b, 1.0).asDiagonal();
    r.predicate_swapped = wrap((push(Ls.transpose(), theta2) - push(Ls.transpose(), theta1)) / kPi, 1.0);
    double h = std::sqrt(a * a + b * b);
    r.closed_formula = std::asin(b * std::sin(theta2.radians()) / h) - std::asin(b * std::sin(theta1.radians()) / h);
    double d = wrap(r.closed_formula - (r.phi2 - r.phi1), kPi);
    r.discrepancy = std::min(d, kPi - d);
    return r;
}

namespace {

bool near_any(double z, const std::vector<double>& vals, double tol) {
    for (double c : vals)
        if (std::abs(z - c) <= tol) return true;
    return false;
}

// zeta breakpoints: critical values, corners, window ends and density breakpoints
std::vector<double> zeta_breaks(const Density& f, const Curve& curve, const ProjectionSplit& sp) {
    std::vector<double> z = critical_values(curve, sp);
    for (const auto& p : sp.pieces) {
        z.push_back(p.vlo);
        z.push_back(p.vhi);
    }
    auto add = [&](double s) {
        if (curve.in_domain(s)) z.push_back(projection(curve, sp.theta, s));
    };
    for (const auto& iv : f.support()) {
        add(iv.lo);
        add(iv.hi);
    }
    if (!f.is_grid())
        for (double b : f.breakpoints()) add(b);
    std::sort(z.begin(), z.end());
    double scale = std::max(1.0, z.empty() ? 1.0 : z.back() - z.front());
    std::vector<double> out;
    for (double v : z)
        if (out.empty() || v - out.back() > 1e-12 * scale) out.push_back(v);
    return out;
}

struct SliceNodes {
    std::vector<double> zeta;
    std::vector<cplx> weighted; // slice value times quadrature weight
};

// zeta = c + w (1 - cos phi) / 2 on every band removes the inverse square-root endpoint behaviour
SliceNodes slice_nodes(const Density& f, const Curve& curve, const ProjectionSplit& sp, double xi_max) {
    SliceNodes out;
    if (f.is_zero()) return out;
    std::vector<double> br = zeta_breaks(f, curve, sp);
    const GaussRule& gl = gauss_legendre(10);
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        double c = br[k], w = br[k + 1] - br[k];
        int panels = std::max(16, static_cast<int>(std::ceil(20.0 * xi_max * w / kTwoPi)));
        double h = kPi / panels;
        for (int p = 0; p < panels; ++p) {
            double mid = (p + 0.5) * h;
            for (int i = 0; i < gl.nodes.size(); ++i) {
                double phi = mid + 0.5 * h * gl.nodes[i];
                double z = c + 0.5 * w * (1.0 - std::cos(phi));
                double jac = 0.5 * w * std::sin(phi) * 0.5 * h * gl.weights[i];
                cplx v = slice_value(f, curve, sp, z);
                if (v == 0.0) continue;
                out.zeta.push_back(z);
                out.weighted.push_back(v * jac);
            }
        }
    }
    return out;
}

} // namespace

RadonSlice radon_projection(const Density& f, const Curve& curve, Angle theta,
                            std::optional<std::vector<double>> zeta_grid) {
    ProjectionSplit sp = projection_split(curve, theta);
    std::vector<double> grid = zeta_grid ? *zeta_grid : default_zeta_grid(sp);
    std::vector<double> crit = critical_values(curve, sp);
    RadonSlice rs;
    rs.theta = theta;
    for (double z : grid) {
        if (near_any(z, crit, 1e-6)) {
            ++rs.skipped;
            continue;
        }
        rs.zeta.push_back(z);
        rs.values.push_back(slice_value(f, curve, sp, z));
    }
    return rs;
}

cplx radon_mass(const Density& f, const Curve& curve, Angle theta) {
    ProjectionSplit sp = projection_split(curve, theta);
    SliceNodes nodes = slice_nodes(f, curve, sp, 0.0);
    cplx acc = 0.0;
    for (const auto& v : nodes.weighted) acc += v;
    return acc;
}

SliceCheck fourier_slice_check(const Density& f, const Curve& curve, Angle theta, const std::vector<double>& xi_grid) {
    SliceCheck sc;
    sc.theta = theta;
    sc.xi = xi_grid;
    double xi_max = 0;
    for (double x : xi_grid) xi_max = std::max(xi_max, std::abs(x));
    ProjectionSplit sp = projection_split(curve, theta);
    SliceNodes nodes = slice_nodes(f, curve, sp, xi_max);
    Point2 dir = theta.direction();
    for (double xi : xi_grid) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < nodes.zeta.size(); ++i) {
            double ph = xi * nodes.zeta[i];
            acc += nodes.weighted[i] * cplx(std::cos(ph), -std::sin(ph));
        }
        cplx direct = fourier_transform(f, curve, xi * dir).value;
        sc.slice_side.push_back(acc);
        sc.direct_side.push_back(direct);
        sc.max_discrepancy = std::max(sc.max_discrepancy, std::abs(acc - direct));
    }
    return sc;
}

} // namespace hup
