#include "hup/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hup {

CircleMapLift::CircleMapLift(CircleFunction map, int grid) : map_(std::move(map)) {
    if (grid < 8) throw Error(ErrorKind::InvalidSpec, "lift grid too small");
    ref_.resize(grid + 1);
    double d0 = map_(0.0);
    ref_[0] = d0;
    for (int i = 1; i <= grid; ++i) {
        double y = static_cast<double>(i) / grid;
        double raw = (i == grid ? d0 - 1.0 : map_(y) - y);
        ref_[i] = raw + std::round(ref_[i - 1] - raw);
    }
    if (std::abs(ref_[grid] - ref_[0]) > 1e-9) {
        std::ostringstream os;
        os << "circle map has degree " << 1 + std::lround(ref_[grid] - ref_[0]) << ", expected 1";
        throw Error(ErrorKind::NotDegreeOne, os.str());
    }
}

std::int64_t CircleMapLift::turn_offset(double y, double image) const {
    const int n = static_cast<int>(ref_.size()) - 1;
    double u = y * n;
    int i = std::clamp(static_cast<int>(u), 0, n - 1);
    double t = u - i;
    double d = ref_[i] + t * (ref_[i + 1] - ref_[i]);
    return std::llround(d - (image - y));
}

LiftPoint CircleMapLift::step(LiftPoint p) const {
    double img = wrap(map_(p.frac), 1.0);
    p.turns += turn_offset(p.frac, img);
    p.frac = img;
    return p;
}

double CircleMapLift::operator()(double x) const {
    double fl = std::floor(x);
    LiftPoint p{static_cast<std::int64_t>(fl), x - fl};
    if (p.frac >= 1.0) {
        p.frac = 0.0;
        ++p.turns;
    }
    return step(p).value();
}

LiftPoint CircleMapLift::iterate(double x0, std::int64_t n) const {
    double fl = std::floor(x0);
    LiftPoint p{static_cast<std::int64_t>(fl), x0 - fl};
    for (std::int64_t i = 0; i < n; ++i) p = step(p);
    return p;
}

std::pair<double, double> CircleMapLift::displacement_bounds() const {
    const int n = static_cast<int>(ref_.size()) - 1;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
        double x = static_cast<double>(i) / n;
        LiftPoint q = step(LiftPoint{0, x});
        double d = static_cast<double>(q.turns) + (q.frac - x);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

CircleMapLift compose_and_lift(const ChordMap& map1, const ChordMap& map2) {
    if (!map1.curve().closed() || !map2.curve().closed())
        throw Error(ErrorKind::NotClosedCurve, "composition needs a closed curve");
    double diff = wrap(map1.theta().radians() - map2.theta().radians(), kPi);
    if (diff < 1e-12 || kPi - diff < 1e-12) throw Error(ErrorKind::SameAngle, "the two lines must differ");
    for (const ChordMap* m : {&map1, &map2}) {
        double z = m->split().I0_measure();
        if (z > 1e-12) {
            std::ostringstream os;
            os << "I0 has measure " << z << " for theta=" << m->theta().radians();
            throw Error(ErrorKind::NonEmptyI0, os.str());
        }
    }
    CircleMapLift lift([map1, map2](double s) { return map2.eval(map1.eval(s)); });
    lift.set_curve(map1.curve());
    return lift;
}

std::vector<Convergent> convergents(double x, long max_q) {
    std::vector<Convergent> out;
    long h0 = 1, h1 = 0, k0 = 0, k1 = 1; // h_{-1}, h_{-2}
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        long ai = static_cast<long>(a);
        long h = ai * h0 + h1, k = ai * k0 + k1;
        if (k > max_q) break;
        out.push_back(Convergent{h, k});
        h1 = h0;
        h0 = h;
        k1 = k0;
        k0 = k;
        double frac = r - a;
        if (frac < 1e-12) break;
        r = 1.0 / frac;
    }
    return out;
}

RotationEstimate rotation_number(const CircleMapLift& lift, double x0, std::int64_t n, int period_cap) {
    if (n < 1) throw Error(ErrorKind::InvalidSpec, "rotation_number needs n >= 1");
    RotationEstimate est;
    est.n = n;
    est.period_cap = period_cap;
    auto [a, b] = lift.displacement_bounds();
    double fl = std::floor(x0);
    LiftPoint start{static_cast<std::int64_t>(fl), x0 - fl};
    LiftPoint p = start;
    for (std::int64_t i = 0; i < n; ++i) {
        LiftPoint q = lift.step(p);
        double d = static_cast<double>(q.turns - p.turns) + (q.frac - p.frac);
        a = std::min(a, d);
        b = std::max(b, d);
        p = q;
    }
    est.a = a;
    est.b = b;
    est.lift_value = (static_cast<double>(p.turns - start.turns) + (p.frac - start.frac)) / static_cast<double>(n);
    est.value = wrap(est.lift_value, 1.0);
    est.convergents = convergents(est.value, period_cap);
    for (const auto& c : est.convergents) {
        if (std::abs(est.value - static_cast<double>(c.p) / c.q) <= 1.0 / static_cast<double>(n) + 1e-12) {
            est.rational_candidate = c;
            break;
        }
    }
    est.orbit = detect_periodic_orbit(lift, period_cap, 1e-10, est.lift_value);
    est.periodic_orbit_found = est.orbit.has_value();
    if (est.orbit) {
        long q = est.orbit->period;
        long pp = est.orbit->rotation - q * static_cast<long>(std::floor(est.lift_value));
        long g = std::gcd(std::abs(pp), q);
        if (g == 0) g = 1;
        est.rational_candidate = Convergent{pp / g, q / g};
    }
    return est;
}

namespace {

template <class G>
std::vector<double> grid_values(G&& g, int m) {
    std::vector<double> v(m);
    for (int i = 0; i < m; ++i) v[i] = g((i + 0.5) / m);
    return v;
}

template <class G>
std::optional<double> transversal_root(G&& g, const std::vector<double>& v, int i, double tol, double band) {
    const int m = static_cast<int>(v.size());
    int j = (i + 1) % m;
    double gi = v[i], gj = v[j];
    if (std::abs(gi) <= tol || std::abs(gj) <= tol) return std::nullopt;
    if (std::abs(gi) > band || std::abs(gj) > band) return std::nullopt;
    if ((gi < 0) == (gj < 0)) return std::nullopt;
    double lo = (i + 0.5) / m, hi = lo + 1.0 / m;
    double r = bisect_sign(g, lo, hi, gi, 100);
    if (std::abs(g(r)) > 1e-8) return std::nullopt; // jump, not a root
    return wrap(r, 1.0);
}

} // namespace

std::optional<PeriodicOrbit> detect_periodic_orbit(const CircleMapLift& lift, int max_period, double tol,
                                                   std::optional<double> rho_hint) {
    if (max_period < 1) throw Error(ErrorKind::InvalidSpec, "max_period must be >= 1");
    const int estimate_n = 4096;
    double rho;
    if (rho_hint) {
        rho = *rho_hint;
    } else {
        LiftPoint e = lift.iterate(0.0, estimate_n);
        rho = e.value() / estimate_n;
    }
    const double eps = 2.0 / estimate_n;
    const int M = 1024;
    for (int q = 1; q <= max_period; ++q) {
        long p = std::lround(q * rho);
        if (std::abs(rho - static_cast<double>(p) / q) > eps) continue;
        auto G = [&](double x) {
            double fl = std::floor(x);
            LiftPoint pt{static_cast<std::int64_t>(fl), x - fl};
            for (int k = 0; k < q; ++k) pt = lift.step(pt);
            return static_cast<double>(pt.turns - static_cast<std::int64_t>(fl) - p) + (pt.frac - (x - fl));
        };
        std::vector<double> v = grid_values(G, M);
        double gmax = 0;
        for (double g : v) gmax = std::max(gmax, std::abs(g));
        auto make = [&](double x, bool everywhere) {
            PeriodicOrbit o;
            o.period = q;
            o.rotation = p;
            o.everywhere = everywhere;
            LiftPoint pt{0, x};
            for (int k = 0; k < q; ++k) {
                o.points.push_back(pt.frac);
                pt = lift.step(pt);
            }
            return o;
        };
        if (gmax <= tol) return make(0.0, true);
        for (int i = 0; i < M; ++i) {
            if (auto r = transversal_root(G, v, i, tol, std::numeric_limits<double>::infinity())) return make(*r, false);
        }
    }
    return std::nullopt;
}

std::optional<PeriodicOrbit> detect_periodic_orbit(const CircleFunction& map, int max_period, double tol,
                                                   const std::vector<double>& excluded) {
    if (max_period < 1) throw Error(ErrorKind::InvalidSpec, "max_period must be >= 1");
    const int M = 1024;
    auto is_excluded = [&](double x) {
        for (double e : excluded) {
            double d = std::abs(wrap(x, 1.0) - wrap(e, 1.0));
            if (std::min(d, 1.0 - d) <= 1e-6) return true;
        }
        return false;
    };
    for (int q = 1; q <= max_period; ++q) {
        auto G = [&](double x) {
            double y = wrap(x, 1.0);
            for (int k = 0; k < q; ++k) y = wrap(map(y), 1.0);
            return wrap(y - wrap(x, 1.0) + 0.5, 1.0) - 0.5;
        };
        std::vector<double> v = grid_values(G, M);
        double gmax = 0;
        for (double g : v) gmax = std::max(gmax, std::abs(g));
        auto make = [&](double x, bool everywhere) {
            PeriodicOrbit o;
            o.period = q;
            o.everywhere = everywhere;
            double y = x;
            for (int k = 0; k < q; ++k) {
                o.points.push_back(y);
                y = wrap(map(y), 1.0);
            }
            return o;
        };
        if (gmax <= tol) {
            for (int i = 0; i < M; ++i)
                if (!is_excluded((i + 0.5) / M)) return make((i + 0.5) / M, true);
        }
        for (int i = 0; i < M; ++i) {
            auto r = transversal_root(G, v, i, tol, 0.25);
            if (r && !is_excluded(*r)) return make(*r, false);
        }
    }
    return std::nullopt;
}

SigmaSequence sigma_sequence(const Curve& curve, Angle theta1, Angle theta2, std::optional<double> sigma0, int n) {
    if (!std::holds_alternative<GraphSpec>(curve.spec()))
        throw Error(ErrorKind::HypothesesFail, "sigma sequence is defined for graph curves");
    if (n < 1) throw Error(ErrorKind::InvalidSpec, "n must be >= 1");
    SigmaSequence out;
    out.theta1 = theta1;
    out.theta2 = theta2;
    double tang[2];
    int idx = 0;
    for (Angle th : {theta1, theta2}) {
        ProjectionSplit sp = projection_split(curve, th.normalized());
        bool ok = sp.critical_set.size() == 1 && sp.pieces.size() == 2 && sp.pieces[0].sign < 0 && sp.pieces[1].sign > 0;
        if (!ok) {
            std::ostringstream os;
            os << "projection for theta=" << th.radians() << " does not have a unique local minimum";
            throw Error(ErrorKind::HypothesesFail, os.str());
        }
        tang[idx++] = sp.critical_set[0];
    }
    out.tangency1 = tang[0];
    out.tangency2 = tang[1];
    ChordMap m1(curve, theta1), m2(curve, theta2);
    double s = sigma0.value_or(tang[0]);
    out.sigma.push_back(s);
    for (int k = 0; k < n; ++k) {
        try {
            s = k == 0 ? m2.eval(s) : m2.eval(m1.eval(s));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::InI0 || e.kind() == ErrorKind::OutOfDomain) {
                out.left_window = true;
                break;
            }
            throw;
        }
        out.sigma.push_back(s);
    }
    bool inc = out.sigma.size() > 2, dec = inc;
    for (std::size_t k = 2; k < out.sigma.size(); ++k) {
        if (!(out.sigma[k] > out.sigma[k - 1])) inc = false;
        if (!(out.sigma[k] < out.sigma[k - 1])) dec = false;
    }
    out.direction = inc ? 1 : (dec ? -1 : 0);
    return out;
}

IntervalMap as_interval_map(const CircleMapLift& lift) {
    return IntervalMap{[lift](double x) { return lift(x); }, true};
}

IntervalMap as_interval_map(const ChordMap& map1, const ChordMap& map2) {
    return IntervalMap{[map1, map2](double x) { return map2.eval(map1.eval(x)); }, false};
}

namespace {

// endpoint images and a 17-point monotonicity check
struct Image {
    double lo, hi;
    bool monotone;
};

Image interval_image(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a), fb = f(b);
    int dir = fb > fa ? 1 : (fb < fa ? -1 : 0);
    bool mono = true;
    double prev = fa;
    for (int i = 1; i <= 17; ++i) {
        double v = f(a + (b - a) * i / 18.0);
        if (dir > 0 && v < prev) mono = false;
        if (dir < 0 && v > prev) mono = false;
        prev = v;
    }
    if (dir > 0 && fb < prev) mono = false;
    if (dir < 0 && fb > prev) mono = false;
    return Image{std::min(fa, fb), std::max(fa, fb), mono};
}

bool is_escape(const Error& e) { return e.kind() == ErrorKind::InI0 || e.kind() == ErrorKind::OutOfDomain; }

} // namespace

IntervalCertificate certify_wandering(const IntervalMap& map, double lo, double hi, long horizon) {
    if (!(hi > lo)) throw Error(ErrorKind::InvalidSpec, "interval must be nondegenerate");
    IntervalCertificate cert;
    cert.kind = "wandering";
    cert.lo = lo;
    cert.hi = hi;
    cert.orbit.push_back({lo, hi});
    const double tol = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
    auto overlaps = [&](double x, double y) {
        if (!map.lift) return std::min(y, hi) - std::max(x, lo) > tol;
        long m0 = static_cast<long>(std::floor(x - hi)) - 1, m1 = static_cast<long>(std::ceil(y - lo)) + 1;
        for (long m = m0; m <= m1; ++m)
            if (std::min(y, hi + m) - std::max(x, lo + m) > tol) return true;
        return false;
    };
    bool escaped = false, settled = false;
    double a = lo, b = hi;
    for (long j = 1; j <= horizon; ++j) {
        Image img{};
        try {
            img = interval_image(map.f, a, b);
        } catch (const Error& e) {
            if (!is_escape(e)) throw;
            escaped = true;
            break;
        }
        if (!img.monotone) cert.monotone = false;
        if (overlaps(img.lo, img.hi)) {
            std::ostringstream os;
            os << "image " << j << " [" << img.lo << ", " << img.hi << "] meets J";
            throw Error(ErrorKind::Overlap, os.str(), j);
        }
        cert.horizon = j;
        settled = img.lo == a && img.hi == b;
        a = img.lo;
        b = img.hi;
        cert.orbit.push_back({a, b});
        if (settled) break;
    }
    cert.final_width = b - a;

    // infinite-horizon upgrade
    const auto& orb = cert.orbit;
    cert.reason = "finite";
    if (orb.size() >= 2 && cert.monotone) {
        int drift = orb[1].first > orb[0].first ? 1 : (orb[1].first < orb[0].first ? -1 : 0);
        bool strict = drift != 0;
        bool tail = false;
        for (std::size_t j = 1; j < orb.size() && strict; ++j) {
            double d = orb[j].first - orb[j - 1].first;
            if (d == 0.0) tail = true;
            else if (tail || (d > 0) != (drift > 0)) strict = false;
        }
        bool side = drift > 0 ? orb[1].first >= hi - tol : orb[1].second <= lo + tol;
        double hlo = lo, hhi = hi;
        for (const auto& iv : orb) {
            hlo = std::min(hlo, iv.first);
            hhi = std::max(hhi, iv.second);
        }
        bool sign_ok = strict && side;
        if (sign_ok) {
            const int G = 4096;
            double prev = -std::numeric_limits<double>::infinity();
            for (int i = 1; i < G && sign_ok; ++i) {
                double x = hlo + (hhi - hlo) * i / G;
                double fx;
                try {
                    fx = map.f(x);
                } catch (const Error& e) {
                    if (!is_escape(e)) throw;
                    continue;
                }
                double d = fx - x;
                if (!(drift > 0 ? d > 0 : d < 0)) sign_ok = false;
                if (!(fx > prev)) sign_ok = false;
                prev = fx;
            }
        }
        if (sign_ok) {
            cert.infinite_horizon = true;
            cert.reason = escaped ? "escape" : "monotone-to-fixed-point";
        }
    }
    return cert;
}

IntervalCertificate certify_attractive(const IntervalMap& map, double lo, double hi, int k, long n_limit) {
    if (!(hi > lo)) throw Error(ErrorKind::InvalidSpec, "interval must be nondegenerate");
    if (k < 1) throw Error(ErrorKind::InvalidSpec, "k must be >= 1");
    auto Fk = [&](double x) {
        for (int i = 0; i < k; ++i) x = map.f(x);
        return x;
    };
    IntervalCertificate cert;
    cert.kind = "attractive";
    cert.lo = lo;
    cert.hi = hi;
    cert.period = k;
    Image img = interval_image(Fk, lo, hi);
    cert.monotone = img.monotone;
    double p = 0;
    if (map.lift) p = std::round(0.5 * ((img.lo - lo) + (img.hi - hi)));
    double x = img.lo - p, y = img.hi - p;
    if (!(x >= lo && y <= hi)) {
        std::ostringstream os;
        os << "Phi^" << k << "(J) = [" << x << ", " << y << "] is not inside J";
        throw Error(ErrorKind::NotContained, os.str(), k);
    }
    cert.orbit.push_back({lo, hi});
    cert.orbit.push_back({x, y});
    cert.lower_increasing = true;
    cert.upper_decreasing = true;
    double a = x, b = y;
    for (long n = 2; n <= n_limit && b - a >= 1e-8; ++n) {
        double fa = Fk(a) - p, fb = Fk(b) - p;
        double na = std::min(fa, fb), nb = std::max(fa, fb);
        if (na < a) cert.lower_increasing = false;
        if (nb > b) cert.upper_decreasing = false;
        a = na;
        b = nb;
        if (cert.orbit.size() < 100000) cert.orbit.push_back({a, b});
    }
    cert.horizon = static_cast<long>(cert.orbit.size()) - 1;
    cert.final_width = b - a;
    if (b - a < 1e-8) cert.limit = 0.5 * (a + b);
    cert.reason = "nested";
    return cert;
}

std::vector<double> orbit(const CircleMapLift& lift, double x0, long n) {
    std::vector<double> out;
    double fl = std::floor(x0);
    LiftPoint p{static_cast<std::int64_t>(fl), x0 - fl};
    out.push_back(p.value());
    for (long i = 0; i < n; ++i) {
        p = lift.step(p);
        out.push_back(p.value());
    }
    return out;
}

} // namespace hup
