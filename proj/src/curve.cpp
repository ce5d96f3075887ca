#include "hup/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hup {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::DerivativeAtCorner: return "DerivativeAtCorner";
    case ErrorKind::FaceNormalToTheta: return "FaceNormalToTheta";
    case ErrorKind::NoCorners: return "NoCorners";
    case ErrorKind::NoCone: return "NoCone";
    case ErrorKind::NotStrictlySupporting: return "NotStrictlySupporting";
    case ErrorKind::InI0: return "InI0";
    case ErrorKind::MultiFold: return "MultiFold";
    case ErrorKind::NotCuspRegime: return "NotCuspRegime";
    case ErrorKind::NotClosedCurve: return "NotClosedCurve";
    case ErrorKind::NonEmptyI0: return "NonEmptyI0";
    case ErrorKind::SameAngle: return "SameAngle";
    case ErrorKind::NotDegreeOne: return "NotDegreeOne";
    case ErrorKind::HypothesesFail: return "HypothesesFail";
    case ErrorKind::Overlap: return "Overlap";
    case ErrorKind::NotContained: return "NotContained";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::TilingGap: return "TilingGap";
    case ErrorKind::StructureAbsent: return "StructureAbsent";
    case ErrorKind::RelationViolated: return "RelationViolated";
    case ErrorKind::DivisionByZeroLocus: return "DivisionByZeroLocus";
    case ErrorKind::TangentLine: return "TangentLine";
    case ErrorKind::DegenerateEllipse: return "DegenerateEllipse";
    }
    return "Unknown";
}

bool ParamDomain::contains(double s, double slack) const {
    if (period) return std::isfinite(s);
    for (const auto& iv : intervals)
        if (iv.contains(s, slack)) return true;
    return false;
}

double ParamDomain::measure() const {
    double m = 0;
    for (const auto& iv : intervals) m += iv.length();
    return m;
}

bool AngleInterval::contains(double theta) const {
    double d = wrap(theta - lo, kPi);
    return d > 0.0 && d < width;
}

namespace detail {

struct CurveImpl {
    CurveSpec spec;
    std::string kind;
    ParamDomain domain;
    std::vector<double> breaks;
    int smooth = 100;

    // polygon
    std::vector<Point2> verts;
    std::vector<double> vparam; // parameter of vertex k, vparam[n] = 1
    double perimeter = 0;

    // tube
    double ell = 0;

    // tabulated spline second derivatives
    std::vector<double> m2;

    std::optional<ConvexityReport> convexity;
};

namespace {

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

double power_psi(const PowerPsi& p, double t, int order, int side) {
    const double a = p.alpha;
    const double inf = std::numeric_limits<double>::infinity();
    if (t == 0.0) {
        if (order == 0) return 0.0;
        double sd = side == 0 ? 1.0 : static_cast<double>(side);
        if (order == 1) {
            double m = a > 1 ? 0.0 : (a == 1 ? 1.0 : inf);
            if (m == 0.0) return 0.0;
            return p.is_signed ? m : sd * m;
        }
        double m = a > 2 ? 0.0 : (a == 2 ? 2.0 : (a == 1 ? 0.0 : inf));
        if (m == 0.0) return 0.0;
        double c = (a == 2) ? 1.0 : sgn(a * (a - 1));
        return p.is_signed ? sd * c * m : c * m;
    }
    double at = std::abs(t);
    double st = sgn(t);
    switch (order) {
    case 0: return p.is_signed ? st * std::pow(at, a) : std::pow(at, a);
    case 1: return p.is_signed ? a * std::pow(at, a - 1) : st * a * std::pow(at, a - 1);
    default: return p.is_signed ? st * a * (a - 1) * std::pow(at, a - 2) : a * (a - 1) * std::pow(at, a - 2);
    }
}

double poly_psi(const PolynomialPsi& p, double t, int order) {
    double acc = 0;
    for (int k = static_cast<int>(p.coeffs.size()) - 1; k >= order; --k) {
        double c = p.coeffs[k];
        for (int j = 0; j < order; ++j) c *= (k - j);
        acc = acc * t + c;
    }
    return acc;
}

double spline_psi(const TabulatedPsi& tab, const std::vector<double>& m2, double t, int order) {
    const auto& x = tab.t;
    const auto& y = tab.y;
    std::size_t n = x.size();
    std::size_t i = std::upper_bound(x.begin(), x.end(), t) - x.begin();
    i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
    double h = x[i + 1] - x[i];
    double A = (x[i + 1] - t) / h, B = (t - x[i]) / h;
    switch (order) {
    case 0:
        return A * y[i] + B * y[i + 1] + ((A * A * A - A) * m2[i] + (B * B * B - B) * m2[i + 1]) * h * h / 6.0;
    case 1:
        return (y[i + 1] - y[i]) / h - (3 * A * A - 1) / 6.0 * h * m2[i] + (3 * B * B - 1) / 6.0 * h * m2[i + 1];
    default:
        return A * m2[i] + B * m2[i + 1];
    }
}

std::vector<double> natural_spline(const TabulatedPsi& tab) {
    std::size_t n = tab.t.size();
    std::vector<double> m(n, 0.0);
    if (n < 3) return m;
    // tridiagonal system for interior second derivatives
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n - 2, n - 2);
    Eigen::VectorXd r(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double h0 = tab.t[i] - tab.t[i - 1], h1 = tab.t[i + 1] - tab.t[i];
        std::size_t k = i - 1;
        A(k, k) = (h0 + h1) / 3.0;
        if (k > 0) A(k, k - 1) = h0 / 6.0;
        if (k + 1 < n - 2) A(k, k + 1) = h1 / 6.0;
        r[k] = (tab.y[i + 1] - tab.y[i]) / h1 - (tab.y[i] - tab.y[i - 1]) / h0;
    }
    Eigen::VectorXd sol = A.partialPivLu().solve(r);
    for (std::size_t i = 1; i + 1 < n; ++i) m[i] = sol[i - 1];
    return m;
}

double psi_eval(const CurveImpl& c, const Psi& psi, double t, int order, int side) {
    if (auto p = std::get_if<PowerPsi>(&psi)) return power_psi(*p, t, order, side);
    if (auto p = std::get_if<PolynomialPsi>(&psi)) return poly_psi(*p, t, order);
    return spline_psi(std::get<TabulatedPsi>(psi), c.m2, t, order);
}

bool power_smooth(const PowerPsi& p) {
    double a = p.alpha;
    bool integer = std::floor(a) == a;
    if (!integer) return false;
    long k = static_cast<long>(a);
    return p.is_signed ? (k % 2 == 1) : (k % 2 == 0);
}

// chi and its s-derivatives for the perturbed circle
void chi_eval(const PerturbedCircleSpec& p, double s, double out[3]) {
    out[0] = out[1] = out[2] = 0.0;
    double u = wrap(s, 1.0);
    if (!(u > 0.0 && u < 0.25)) return;
    double x = 8.0 * u - 1.0;
    double q = 1.0 - x * x;
    double k = p.sharpness;
    double g = k * (1.0 - 1.0 / q);
    if (g < -745.0) return;
    double B = std::exp(g);
    double gx = -2.0 * k * x / (q * q);
    double gxx = -2.0 * k * (1.0 + 3.0 * x * x) / (q * q * q);
    double g1 = 8.0 * gx, g2 = 64.0 * gxx;
    double B1 = g1 * B, B2 = (g2 + g1 * g1) * B;
    double S = std::sin(8.0 * kPi * u), S1 = 8.0 * kPi * std::cos(8.0 * kPi * u), S2 = -64.0 * kPi * kPi * S;
    out[0] = p.epsilon * S * B;
    out[1] = p.epsilon * (S1 * B + S * B1);
    out[2] = p.epsilon * (S2 * B + 2.0 * S1 * B1 + S * B2);
}

Point2 eval_impl(const CurveImpl& c, double s, int order, int side) {
    const double w = kTwoPi;
    return std::visit(
        [&](const auto& sp) -> Point2 {
            using T = std::decay_t<decltype(sp)>;
            if constexpr (std::is_same_v<T, GraphSpec>) {
                if (order == 0) return Point2(s, psi_eval(c, sp.psi, s, 0, side));
                if (order == 1) return Point2(1.0, psi_eval(c, sp.psi, s, 1, side));
                return Point2(0.0, psi_eval(c, sp.psi, s, 2, side));
            } else if constexpr (std::is_same_v<T, EllipseSpec>) {
                double x = w * s;
                Eigen::Rotation2Dd R(sp.rotation);
                Point2 v;
                if (order == 0) v = Point2(sp.a * std::cos(x), sp.b * std::sin(x));
                else if (order == 1) v = w * Point2(-sp.a * std::sin(x), sp.b * std::cos(x));
                else v = -w * w * Point2(sp.a * std::cos(x), sp.b * std::sin(x));
                Point2 r = R * v;
                if (order == 0) r += sp.center;
                return r;
            } else if constexpr (std::is_same_v<T, HyperbolaSpec>) {
                double x = w * s;
                double sn = std::sin(x), cs = std::cos(x);
                if (order == 0) return Point2(cs / sn, 1.0 / sn);
                if (order == 1) return w * Point2(-1.0 / (sn * sn), -cs / (sn * sn));
                return w * w * Point2(2.0 * cs / (sn * sn * sn), (1.0 + cs * cs) / (sn * sn * sn));
            } else if constexpr (std::is_same_v<T, PolygonSpec>) {
                double u = wrap(s, 1.0);
                std::size_t n = c.verts.size();
                std::size_t k = std::upper_bound(c.vparam.begin(), c.vparam.end(), u) - c.vparam.begin() - 1;
                if (k >= n) k = n - 1;
                if (side < 0 && u == c.vparam[k]) k = (k + n - 1) % n;
                const Point2& a = c.verts[k];
                const Point2& b = c.verts[(k + 1) % n];
                Point2 d = b - a;
                double len = d.norm();
                Point2 vel = d / len * c.perimeter;
                if (order == 0) {
                    double local = u - c.vparam[k];
                    if (local < 0) local += 1.0; // left side at vertex 0
                    return a + vel * local;
                }
                if (order == 1) return vel;
                return Point2::Zero();
            } else if constexpr (std::is_same_v<T, TubeSpec>) {
                double t = wrap(s, 1.0);
                double l = c.ell;
                int piece = static_cast<int>(std::floor(t * 4.0));
                if (piece > 3) piece = 3;
                if (side < 0 && t * 4.0 == std::floor(t * 4.0)) piece = (piece + 3) % 4;
                if (side < 0 && t == 0.0) t = 1.0;
                switch (piece) {
                case 0: {
                    double x = 4.0 * kPi * (t - 0.125);
                    if (order == 0) return Point2(l + std::cos(x), std::sin(x));
                    if (order == 1) return 4.0 * kPi * Point2(-std::sin(x), std::cos(x));
                    return -16.0 * kPi * kPi * Point2(std::cos(x), std::sin(x));
                }
                case 1:
                    if (order == 0) return Point2(l * (2.0 - 4.0 * t), 1.0);
                    if (order == 1) return Point2(-4.0 * l, 0.0);
                    return Point2::Zero();
                case 2: {
                    double x = 4.0 * kPi * (t - 0.375);
                    if (order == 0) return Point2(std::cos(x), std::sin(x));
                    if (order == 1) return 4.0 * kPi * Point2(-std::sin(x), std::cos(x));
                    return -16.0 * kPi * kPi * Point2(std::cos(x), std::sin(x));
                }
                default:
                    if (order == 0) return Point2(l * (-3.0 + 4.0 * t), -1.0);
                    if (order == 1) return Point2(4.0 * l, 0.0);
                    return Point2::Zero();
                }
            } else {
                double ch[3];
                chi_eval(sp, s, ch);
                double x = w * s;
                Point2 e(std::cos(x), std::sin(x)), n(-std::sin(x), std::cos(x));
                double r = 1.0 + ch[0];
                if (order == 0) return r * e;
                if (order == 1) return ch[1] * e + r * w * n;
                return ch[2] * e + 2.0 * ch[1] * w * n - r * w * w * e;
            }
        },
        c.spec);
}

Point2 direction_of(const Point2& v) {
    if (!std::isfinite(v.x()) || !std::isfinite(v.y())) {
        Point2 d(std::isinf(v.x()) ? sgn(v.x()) : 0.0, std::isinf(v.y()) ? sgn(v.y()) : 0.0);
        return d.normalized();
    }
    return v.normalized();
}

double angle_between(const Point2& a, const Point2& b) {
    return std::abs(std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b)));
}

void check_perturbed(CurveImpl& c, const PerturbedCircleSpec& p) {
    if (!(p.epsilon > 0) || !(p.sharpness > 0)) throw Error(ErrorKind::InvalidSpec, "perturbed_circle needs epsilon > 0 and sharpness > 0");
    ConvexityReport rep;
    rep.grid = 20000;
    rep.standard_min = std::numeric_limits<double>::infinity();
    rep.variant_min = std::numeric_limits<double>::infinity();
    for (int i = 1; i < rep.grid; ++i) {
        double s = 0.25 * i / rep.grid;
        double ch[3];
        chi_eval(p, s, ch);
        double r = 1.0 + ch[0];
        double r1 = ch[1] / kTwoPi, r2 = ch[2] / (kTwoPi * kTwoPi);
        rep.standard_min = std::min(rep.standard_min, r * r + 2 * r1 * r1 - r * r2);
        rep.variant_min = std::min(rep.variant_min, r * r + r1 * r1 - 2 * r * r2);
        rep.chi_max = std::max(rep.chi_max, std::abs(ch[0]));
        double sn = std::sin(8.0 * kPi * s);
        if (ch[0] != 0.0 && sgn(ch[0]) != sgn(sn))
            throw Error(ErrorKind::InvalidSpec, "perturbation sign pattern violated");
        if (s < 0.125 && ch[0] >= 0.5) throw Error(ErrorKind::InvalidSpec, "perturbation exceeds 1/2 on (0,1/8)");
    }
    if (rep.standard_min < 0) {
        std::ostringstream os;
        os << "perturbed circle is not convex (min r^2+2r'^2-rr'' = " << rep.standard_min << ")";
        throw Error(ErrorKind::InvalidSpec, os.str());
    }
    c.convexity = rep;
}

} // namespace
} // namespace detail

Curve::Curve(CurveSpec spec) {
    auto impl = std::make_shared<detail::CurveImpl>();
    impl->spec = std::move(spec);
    auto& c = *impl;
    const Interval unit{0.0, 1.0, true, false};

    std::visit(
        [&](auto& sp) {
            using T = std::decay_t<decltype(sp)>;
            if constexpr (std::is_same_v<T, GraphSpec>) {
                c.kind = "graph";
                if (auto tab = std::get_if<TabulatedPsi>(&sp.psi)) {
                    if (tab->t.size() < 3 || tab->t.size() != tab->y.size())
                        throw Error(ErrorKind::InvalidSpec, "tabulated psi needs >= 3 matching samples");
                    if (!std::is_sorted(tab->t.begin(), tab->t.end()) ||
                        std::adjacent_find(tab->t.begin(), tab->t.end()) != tab->t.end())
                        throw Error(ErrorKind::InvalidSpec, "tabulated psi abscissae must increase");
                    c.m2 = detail::natural_spline(*tab);
                    sp.lo = std::max(sp.lo, tab->t.front());
                    sp.hi = std::min(sp.hi, tab->t.back());
                }
                if (!(sp.lo < sp.hi)) throw Error(ErrorKind::InvalidSpec, "graph window must have lo < hi");
                c.domain.intervals = {Interval{sp.lo, sp.hi}};
                if (auto p = std::get_if<PowerPsi>(&sp.psi)) {
                    if (!(p->alpha > 0)) throw Error(ErrorKind::InvalidSpec, "power exponent must be positive");
                    if (!detail::power_smooth(*p)) {
                        if (sp.lo < 0 && sp.hi > 0) c.breaks = {0.0};
                        c.smooth = p->alpha >= 1 ? static_cast<int>(std::floor(p->alpha)) - (std::floor(p->alpha) == p->alpha ? 1 : 0) : 0;
                        if (c.smooth < 0) c.smooth = 0;
                    }
                } else if (std::holds_alternative<TabulatedPsi>(sp.psi)) {
                    c.smooth = 2;
                }
            } else if constexpr (std::is_same_v<T, EllipseSpec>) {
                c.kind = "ellipse";
                if (!(sp.a > 0 && sp.b > 0)) throw Error(ErrorKind::InvalidSpec, "ellipse semi-axes must be positive");
                c.domain.intervals = {unit};
                c.domain.period = 1.0;
            } else if constexpr (std::is_same_v<T, HyperbolaSpec>) {
                c.kind = "hyperbola_std";
                if (!(sp.window > 0)) throw Error(ErrorKind::InvalidSpec, "hyperbola window must be positive");
                double sa = std::atan(1.0 / sp.window) / kTwoPi;
                c.domain.intervals = {Interval{sa, 0.5 - sa}, Interval{0.5 + sa, 1.0 - sa}};
            } else if constexpr (std::is_same_v<T, PolygonSpec>) {
                c.kind = "polygon";
                auto v = sp.vertices;
                std::size_t n = v.size();
                if (n < 3) throw Error(ErrorKind::InvalidSpec, "polygon needs at least 3 vertices");
                double area = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const Point2& a = v[i];
                    const Point2& b = v[(i + 1) % n];
                    area += a.x() * b.y() - a.y() * b.x();
                }
                if (area < 0) std::reverse(v.begin() + 1, v.end());
                for (std::size_t i = 0; i < n; ++i) {
                    Point2 e0 = v[(i + 1) % n] - v[i];
                    Point2 e1 = v[(i + 2) % n] - v[(i + 1) % n];
                    if (e0.norm() == 0) throw Error(ErrorKind::InvalidSpec, "repeated polygon vertex");
                    if (e0.x() * e1.y() - e0.y() * e1.x() <= 1e-14 * e0.norm() * e1.norm())
                        throw Error(ErrorKind::InvalidSpec, "polygon must be strictly convex");
                }
                c.verts = v;
                c.vparam.assign(n + 1, 0.0);
                double acc = 0;
                std::vector<double> cum(n + 1, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    acc += (v[(i + 1) % n] - v[i]).norm();
                    cum[i + 1] = acc;
                }
                c.perimeter = acc;
                for (std::size_t i = 0; i <= n; ++i) c.vparam[i] = cum[i] / acc;
                c.vparam[n] = 1.0;
                c.breaks.assign(c.vparam.begin(), c.vparam.end() - 1);
                c.domain.intervals = {unit};
                c.domain.period = 1.0;
                c.smooth = 0;
            } else if constexpr (std::is_same_v<T, TubeSpec>) {
                c.kind = "tube";
                if (!(std::abs(sp.theta1) < kPi / 2 && std::abs(sp.theta2) < kPi / 2))
                    throw Error(ErrorKind::InvalidSpec, "tube angles must lie in (-pi/2, pi/2)");
                c.ell = -2.0 * std::tan(sp.theta1) + 2.0 * std::tan(sp.theta2);
                if (!(c.ell > 0)) throw Error(ErrorKind::InvalidSpec, "tube needs l = -2 tan theta1 + 2 tan theta2 > 0");
                c.breaks = {0.0, 0.25, 0.5, 0.75};
                c.domain.intervals = {unit};
                c.domain.period = 1.0;
                c.smooth = 1;
            } else {
                c.kind = "perturbed_circle";
                c.domain.intervals = {unit};
                c.domain.period = 1.0;
                detail::check_perturbed(c, sp);
            }
        },
        c.spec);
    impl_ = std::move(impl);
}

const CurveSpec& Curve::spec() const { return impl_->spec; }
std::string Curve::kind() const { return impl_->kind; }
const ParamDomain& Curve::domain() const { return impl_->domain; }
int Curve::smoothness() const { return impl_->smooth; }
const std::vector<double>& Curve::breakpoints() const { return impl_->breaks; }
bool Curve::piecewise_linear() const { return std::holds_alternative<PolygonSpec>(impl_->spec); }
std::optional<ConvexityReport> Curve::convexity() const { return impl_->convexity; }
double Curve::tube_length() const { return impl_->ell; }

double Curve::reduce(double s) const { return closed() ? wrap(s, *domain().period) : s; }

Point2 Curve::eval_side(double s, int order, int side) const {
    if (!domain().contains(s)) {
        std::ostringstream os;
        os << "parameter " << s << " outside the " << kind() << " domain";
        throw Error(ErrorKind::OutOfDomain, os.str());
    }
    return detail::eval_impl(*impl_, reduce(s), order, side);
}

std::pair<Point2, Point2> Curve::one_sided_derivative(double s) const {
    return {eval_side(s, 1, -1), eval_side(s, 1, +1)};
}

static bool near_breakpoint(const Curve& c, double s, double* which) {
    double u = c.reduce(s);
    for (double b : c.breakpoints()) {
        double d = std::abs(u - b);
        if (c.closed()) d = std::min(d, 1.0 - d);
        if (d <= 1e-15) {
            if (which) *which = b;
            return true;
        }
    }
    return false;
}

Point2 Curve::eval(double s, int order) const {
    if (order == 0) return eval_side(s, 0, 0);
    double b;
    if (near_breakpoint(*this, s, &b)) {
        Point2 l1 = eval_side(b, 1, -1), r1 = eval_side(b, 1, +1);
        bool finite = l1.allFinite() && r1.allFinite();
        if (!finite || detail::angle_between(l1, r1) > 1e-9) {
            std::ostringstream os;
            os << "derivative requested at corner s=" << b << "; use one_sided_derivative";
            throw Error(ErrorKind::DerivativeAtCorner, os.str());
        }
        return eval_side(b, order, +1);
    }
    return eval_side(s, order, 0);
}

std::vector<double> Curve::corners() const {
    std::vector<double> out;
    for (double b : breakpoints()) {
        auto [l, r] = one_sided_derivative(b);
        if (detail::angle_between(detail::direction_of(l), detail::direction_of(r)) > 1e-9) out.push_back(b);
    }
    return out;
}

double projection(const Curve& curve, Angle theta, double s) { return curve.eval(s, 0).dot(theta.direction()); }

double projection_derivative(const Curve& curve, Angle theta, double s, int side) {
    if (side == 0) return curve.eval(s, 1).dot(theta.direction());
    return curve.eval_side(s, 1, side).dot(theta.direction());
}

namespace {

AngleInterval arc(const Point2& v1, const Point2& v2) {
    double a1 = std::atan2(v1.y(), v1.x());
    double d = std::atan2(v1.x() * v2.y() - v1.y() * v2.x(), v1.dot(v2));
    AngleInterval out;
    if (d > 0) {
        out.lo = wrap(a1, kPi);
        out.width = d;
    } else {
        out.lo = wrap(a1 + d, kPi);
        out.width = -d;
    }
    return out;
}

AngleInterval dual(const AngleInterval& c) { return AngleInterval{wrap(c.lo - kPi / 2, kPi), c.width}; }

} // namespace

CornerCones corner_cones_at(const Curve& curve, double s, std::optional<Point2> support_direction) {
    auto [l, r] = curve.one_sided_derivative(s);
    Point2 tin = detail::direction_of(l), tout = detail::direction_of(r);
    if (detail::angle_between(tin, tout) <= 1e-9) throw Error(ErrorKind::NoCorners, "parameter is not a corner");
    Point2 b = -tin, f = tout;
    if (detail::angle_between(b, f) <= 1e-9) throw Error(ErrorKind::NoCone, "cusp corner: half-tangents are antiparallel, no strict cone");

    Point2 h;
    if (support_direction) {
        h = support_direction->normalized();
        Point2 n(-h.y(), h.x());
        if (n.dot(b + f) < 0) n = -n;
        if (!(n.dot(b) > 1e-12 && n.dot(f) > 1e-12))
            throw Error(ErrorKind::NotStrictlySupporting, "supporting line is not strict at the corner");
    } else {
        Point2 m = (b + f).normalized();
        h = Point2(-m.y(), m.x());
    }
    Point2 u = h.dot(b) >= h.dot(f) ? h : Point2(-h);

    CornerCones out;
    out.s = curve.reduce(s);
    out.point = curve.eval(s, 0);
    out.tangent_in = tin;
    out.tangent_out = tout;
    out.support = u;
    out.cone_plus = arc(b, u);
    out.cone_minus = arc(f, -u);
    out.dual_plus = dual(out.cone_plus);
    out.dual_minus = dual(out.cone_minus);
    return out;
}

std::vector<CornerCones> corner_cones(const Curve& curve) {
    auto cs = curve.corners();
    if (cs.empty()) throw Error(ErrorKind::NoCorners, "curve has no corners");
    std::vector<CornerCones> out;
    for (double s : cs) out.push_back(corner_cones_at(curve, s));
    return out;
}

std::optional<std::pair<CornerCones, AngleInterval>> admissible_theta2(const Curve& curve, Angle theta1) {
    double t = theta1.normalized().radians();
    for (const auto& cc : corner_cones(curve)) {
        if (cc.dual_plus.contains(t)) return std::make_pair(cc, cc.dual_minus);
        if (cc.dual_minus.contains(t)) return std::make_pair(cc, cc.dual_plus);
    }
    return std::nullopt;
}

Curve regular_polygon(int n, double radius) {
    PolygonSpec p;
    for (int k = 0; k < n; ++k) p.vertices.emplace_back(radius * std::cos(kTwoPi * k / n), radius * std::sin(kTwoPi * k / n));
    return Curve(p);
}

} // namespace hup
