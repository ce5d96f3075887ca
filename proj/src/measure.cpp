#include "hup/measure.hpp"

#include "hup/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace hup {

namespace {

using IvSet = std::vector<Interval>;

IvSet normalize(IvSet v, double eps = 1e-14) {
    v.erase(std::remove_if(v.begin(), v.end(), [](const Interval& iv) { return !(iv.hi > iv.lo); }), v.end());
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    IvSet out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi + eps) out.back().hi = std::max(out.back().hi, iv.hi);
        else out.push_back(Interval{iv.lo, iv.hi});
    }
    return out;
}

// closed curves: bring [lo, hi] (hi - lo <= 1) into [0, 1]
IvSet wrap_split(const Interval& iv, bool closed) {
    if (!closed) return {iv};
    if (iv.hi - iv.lo >= 1.0) return {Interval{0.0, 1.0}};
    double shift = std::floor(iv.lo);
    double lo = iv.lo - shift, hi = iv.hi - shift;
    if (hi <= 1.0) return {Interval{lo, hi}};
    return {Interval{lo, 1.0}, Interval{0.0, hi - 1.0}};
}

IvSet subtract(const IvSet& a, const IvSet& b) {
    IvSet out;
    for (const auto& iv : a) {
        double lo = iv.lo;
        for (const auto& cut : b) {
            if (cut.hi <= lo || cut.lo >= iv.hi) continue;
            if (cut.lo > lo) out.push_back(Interval{lo, cut.lo});
            lo = std::max(lo, cut.hi);
            if (lo >= iv.hi) break;
        }
        if (lo < iv.hi) out.push_back(Interval{lo, iv.hi});
    }
    return out;
}

IvSet intersect(const IvSet& a, const IvSet& b) {
    IvSet out;
    for (const auto& x : a)
        for (const auto& y : b) {
            double lo = std::max(x.lo, y.lo), hi = std::min(x.hi, y.hi);
            if (hi > lo) out.push_back(Interval{lo, hi});
        }
    return normalize(out);
}

double total(const IvSet& v) {
    double m = 0;
    for (const auto& iv : v) m += iv.length();
    return m;
}

bool member(const IvSet& v, double s) {
    for (const auto& iv : v)
        if (s >= iv.lo && s <= iv.hi) return true;
    return false;
}

double bump(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

bool near_breakpoint(const Curve& curve, double s) {
    for (double b : curve.breakpoints()) {
        double d = std::abs(b - s);
        if (curve.closed()) d = std::min(d, std::abs(1.0 - d));
        if (d <= 1e-14) return true;
    }
    return false;
}

} // namespace

// ---------------------------------------------------------------- Density

Density Density::from_function(Fn f, std::vector<Interval> support, std::vector<double> breakpoints,
                               std::optional<double> period, std::string label) {
    Density d;
    d.kind_ = Kind::Function;
    d.fn_ = std::move(f);
    d.support_ = normalize(std::move(support));
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    d.breaks_ = std::move(breakpoints);
    d.period_ = period;
    d.label_ = std::move(label);
    return d;
}

Density Density::from_grid(Eigen::VectorXd nodes, Eigen::VectorXcd values, std::vector<Interval> support,
                           bool periodic) {
    if (nodes.size() != values.size() || nodes.size() < 2)
        throw Error(ErrorKind::InvalidSpec, "grid density needs matching nodes and values (at least 2)");
    Density d;
    d.kind_ = Kind::Grid;
    d.nodes_ = std::move(nodes);
    d.values_ = std::move(values);
    d.support_ = normalize(std::move(support));
    d.periodic_grid_ = periodic;
    if (periodic) d.period_ = 1.0;
    d.breaks_.assign(d.nodes_.data(), d.nodes_.data() + d.nodes_.size());
    d.label_ = "grid";
    return d;
}

cplx Density::operator()(double s) const {
    if (kind_ == Kind::Zero) return 0.0;
    double x = period_ ? wrap(s, *period_) : s;
    const Interval* in = nullptr;
    for (const auto& iv : support_)
        if (x >= iv.lo && x <= iv.hi) {
            in = &iv;
            break;
        }
    if (!in) return 0.0;
    if (kind_ == Kind::Function) return fn_(x);

    const Eigen::Index n = nodes_.size();
    if (periodic_grid_) {
        double u = x * static_cast<double>(n);
        double fl = std::floor(u);
        Eigen::Index i = static_cast<Eigen::Index>(fl) % n;
        double t = u - fl;
        return (1.0 - t) * values_[i] + t * values_[(i + 1) % n];
    }
    const double* b = nodes_.data();
    Eigen::Index i = std::upper_bound(b, b + n, x) - b; // nodes[i-1] <= x < nodes[i]
    if (i == 0) return values_[0];
    if (i == n) return values_[n - 1];
    bool left_in = nodes_[i - 1] >= in->lo, right_in = nodes_[i] <= in->hi;
    if (!left_in) return values_[i];
    if (!right_in) return values_[i - 1];
    double t = (x - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
    return (1.0 - t) * values_[i - 1] + t * values_[i];
}

Density Density::scaled(cplx a) const {
    if (kind_ == Kind::Zero) return *this;
    Density d = *this;
    if (kind_ == Kind::Grid) {
        d.values_ *= a;
    } else {
        Fn f = fn_;
        d.fn_ = [f, a](double s) { return a * f(s); };
    }
    return d;
}

Density Density::combine(cplx a, const Density& f, cplx b, const Density& g) {
    if (f.is_zero() && g.is_zero()) return Density();
    IvSet sup = f.support_;
    sup.insert(sup.end(), g.support_.begin(), g.support_.end());
    std::vector<double> br = f.breaks_;
    br.insert(br.end(), g.breaks_.begin(), g.breaks_.end());
    for (const auto& iv : f.support_) br.insert(br.end(), {iv.lo, iv.hi});
    for (const auto& iv : g.support_) br.insert(br.end(), {iv.lo, iv.hi});
    auto period = f.period_ ? f.period_ : g.period_;
    return from_function([a, f, b, g](double s) { return a * f(s) + b * g(s); }, sup, br, period, "combination");
}

Eigen::VectorXd domain_grid(const Curve& curve, int n) {
    if (n < 2) throw Error(ErrorKind::InvalidSpec, "grid needs at least 2 nodes");
    if (curve.closed()) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = static_cast<double>(i) / n;
        return x;
    }
    const auto& ivs = curve.domain().intervals;
    double len = curve.domain().measure();
    std::vector<double> pts;
    for (const auto& iv : ivs) {
        int k = std::max(2, static_cast<int>(std::lround(n * iv.length() / len)));
        double h = iv.length() / k;
        for (int i = 0; i < k; ++i) pts.push_back(iv.lo + (i + 0.5) * h);
    }
    return Eigen::Map<Eigen::VectorXd>(pts.data(), static_cast<Eigen::Index>(pts.size()));
}

Density Density::sampled(const Curve& curve, int n) const {
    Eigen::VectorXd x = domain_grid(curve, n);
    Eigen::VectorXcd v(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) v[i] = (*this)(x[i]);
    return from_grid(x, v, curve.domain().intervals, curve.closed());
}

// ---------------------------------------------------------------- integration

namespace {

// cut [lo, hi] at density and curve breakpoints
std::vector<double> cut_points(const Density& f, const Curve& curve, double lo, double hi) {
    std::vector<double> cuts{lo, hi};
    auto add = [&](double b) {
        if (curve.closed() || f.period()) {
            for (double k = std::floor(lo) - 1; k <= std::ceil(hi) + 1; k += 1.0)
                if (b + k > lo && b + k < hi) cuts.push_back(b + k);
        } else if (b > lo && b < hi) {
            cuts.push_back(b);
        }
    };
    for (double b : f.breakpoints()) add(b);
    for (double b : curve.breakpoints()) add(b);
    for (const auto& iv : f.support()) {
        add(iv.lo);
        add(iv.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

template <class G>
auto integrate_cuts(G&& g, const std::vector<double>& cuts) {
    using R = decltype(g(0.0));
    R acc{};
    int per = cuts.size() > 256 ? 1 : 8;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += integrate_panels(g, cuts[i], cuts[i + 1], per, 10);
    return acc;
}

} // namespace

cplx integrate_density(const Density& f, const Curve& curve, double lo, double hi) {
    if (f.is_zero() || !(hi > lo)) return 0.0;
    return integrate_cuts([&](double s) { return f(s); }, cut_points(f, curve, lo, hi));
}

double integrate_abs(const Density& f, const Curve& curve, double lo, double hi) {
    if (f.is_zero() || !(hi > lo)) return 0.0;
    return integrate_cuts([&](double s) { return std::abs(f(s)); }, cut_points(f, curve, lo, hi));
}

double l1_norm(const Density& f, const Curve& curve) {
    if (f.is_zero()) return 0.0;
    double acc = 0;
    IvSet dom = f.support();
    if (dom.empty()) dom = curve.domain().intervals;
    for (const auto& iv : intersect(normalize(dom), normalize(curve.domain().intervals)))
        acc += integrate_abs(f, curve, iv.lo, iv.hi);
    return acc;
}

QuadratureResult fourier_transform(const Density& f, const Curve& curve, const Point2& xi, FourierOptions opt) {
    QuadratureResult res;
    res.value = 0.0;
    if (f.is_zero()) return res;
    IvSet dom = intersect(normalize(f.support()), normalize(curve.domain().intervals));

    struct Seg {
        double a, b;
        std::vector<double> s, w; // cumulative blend measure at samples, for panel placement
        int n;
        cplx value;
        double err;
    };
    std::vector<Seg> segs;
    for (const auto& iv : dom) {
        auto cuts = cut_points(f, curve, iv.lo, iv.hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i + 1] > cuts[i]) segs.push_back(Seg{cuts[i], cuts[i + 1], {}, {}, 0, 0.0, 0.0});
    }
    const bool many = segs.size() > 256;
    const int K = many ? 2 : 33;
    for (auto& sg : segs) {
        std::vector<double> ph(K);
        sg.s.resize(K);
        for (int j = 0; j < K; ++j) {
            sg.s[j] = sg.a + (sg.b - sg.a) * j / (K - 1);
            ph[j] = curve.eval(sg.s[j]).dot(xi);
        }
        std::vector<double> c(K, 0.0);
        for (int j = 1; j < K; ++j) c[j] = c[j - 1] + std::abs(ph[j] - ph[j - 1]);
        double V = c[K - 1];
        sg.w.resize(K);
        for (int j = 0; j < K; ++j) sg.w[j] = V > 1e-12 ? 0.5 * c[j] / V + 0.5 * j / (K - 1.0) : j / (K - 1.0);
        sg.n = std::max(many ? 1 : 4, static_cast<int>(std::ceil(10.0 * V / kTwoPi)));
    }
    const GaussRule& gl = gauss_legendre(10);
    auto panel_sum = [&](const Seg& sg, int n) {
        // panel boundaries at equal steps of the blended measure
        cplx acc = 0.0;
        double prev = sg.a;
        std::size_t j = 1;
        for (int p = 1; p <= n; ++p) {
            double target = static_cast<double>(p) / n;
            double next;
            if (p == n) {
                next = sg.b;
            } else {
                while (j + 1 < sg.w.size() && sg.w[j] < target) ++j;
                double w0 = sg.w[j - 1], w1 = sg.w[j];
                double t = w1 > w0 ? (target - w0) / (w1 - w0) : 0.0;
                next = sg.s[j - 1] + t * (sg.s[j] - sg.s[j - 1]);
            }
            double h = next - prev, mid = prev + 0.5 * h;
            for (int i = 0; i < gl.nodes.size(); ++i) {
                double s = mid + 0.5 * h * gl.nodes[i];
                double phase = curve.eval(s).dot(xi);
                acc += (0.5 * h * gl.weights[i]) * f(s) * cplx(std::cos(phase), -std::sin(phase));
            }
            prev = next;
        }
        return acc;
    };
    double err_total = 0;
    std::vector<cplx> coarse(segs.size());
    for (std::size_t k = 0; k < segs.size(); ++k) {
        coarse[k] = panel_sum(segs[k], segs[k].n);
        segs[k].value = panel_sum(segs[k], 2 * segs[k].n);
        segs[k].err = std::abs(segs[k].value - coarse[k]);
        err_total += segs[k].err;
    }
    const double share = opt.abs_tol / std::max<std::size_t>(1, segs.size());
    for (int d = 0; d < opt.max_doublings && err_total > opt.abs_tol; ++d) {
        err_total = 0;
        for (auto& sg : segs) {
            if (sg.err > share) {
                sg.n *= 2;
                cplx fine = panel_sum(sg, 2 * sg.n);
                sg.err = std::abs(fine - sg.value);
                sg.value = fine;
            }
            err_total += sg.err;
        }
    }
    for (const auto& sg : segs) {
        res.value += sg.value;
        res.panels += 2 * sg.n;
    }
    res.error = err_total;
    res.converged = err_total <= opt.abs_tol;
    if (!res.converged && opt.throw_on_failure) {
        std::ostringstream os;
        os << "Fourier quadrature error estimate " << err_total << " above " << opt.abs_tol;
        throw Error(ErrorKind::QuadratureNotConverged, os.str());
    }
    return res;
}

AnnihilationReport check_annihilation(const Density& f, const Curve& curve, const std::vector<Angle>& lines,
                                      double t_lo, double t_hi, int t_count) {
    if (t_count < 1) throw Error(ErrorKind::InvalidSpec, "t_count must be positive");
    AnnihilationReport rep;
    rep.t_lo = t_lo;
    rep.t_hi = t_hi;
    rep.t_count = t_count;
    for (Angle th : lines) {
        LineReport lr;
        lr.theta = th;
        Point2 d = th.direction();
        for (int i = 0; i < t_count; ++i) {
            double t = t_count == 1 ? t_lo : t_lo + (t_hi - t_lo) * i / (t_count - 1);
            QuadratureResult q = fourier_transform(f, curve, t * d);
            lr.t.push_back(t);
            lr.values.push_back(q.value);
            lr.max_modulus = std::max(lr.max_modulus, std::abs(q.value));
            lr.max_error = std::max(lr.max_error, q.error);
            lr.converged = lr.converged && q.converged;
        }
        rep.lines.push_back(std::move(lr));
    }
    return rep;
}

// ---------------------------------------------------------------- level-set relations

double abs_projection_speed(const Curve& curve, Angle theta, double s) {
    int side = near_breakpoint(curve, s) ? +1 : 0;
    return std::abs(projection_derivative(curve, theta, s, side));
}

cplx slice_value(const Density& f, const Curve& curve, const ProjectionSplit& split, double zeta) {
    cplx acc = 0.0;
    for (double s : level_set_solve(curve, split, zeta)) {
        cplx v = f(s);
        if (v == 0.0) continue;
        acc += v / abs_projection_speed(curve, split.theta, s);
    }
    return acc;
}

std::vector<double> critical_values(const Curve& curve, const ProjectionSplit& split) {
    std::vector<double> out;
    for (double c : split.critical_set) out.push_back(projection(curve, split.theta, c));
    for (double b : curve.breakpoints()) out.push_back(projection(curve, split.theta, b));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> default_zeta_grid(const ProjectionSplit& split, int n) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : split.pieces) {
        lo = std::min(lo, p.vlo);
        hi = std::max(hi, p.vhi);
    }
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
    return z;
}

double eqfund_residual(const Density& f, const Curve& curve, Angle theta, std::optional<std::vector<double>> zeta_grid) {
    if (f.is_zero()) return 0.0;
    ProjectionSplit sp = projection_split(curve, theta);
    std::vector<double> grid = zeta_grid ? *zeta_grid : default_zeta_grid(sp);
    std::vector<double> crit = critical_values(curve, sp);
    double r = 0;
    for (double z : grid) {
        bool skip = false;
        for (double c : crit)
            if (std::abs(z - c) <= 1e-6) skip = true;
        if (skip) continue;
        r = std::max(r, std::abs(slice_value(f, curve, sp, z)));
    }
    return r;
}

// ---------------------------------------------------------------- propagation

std::vector<Interval> chord_image(const ChordMap& map, const Interval& J) {
    const Curve& curve = map.curve();
    const bool closed = curve.closed();
    const ProjectionSplit& sp = map.split();
    std::vector<double> cuts{J.lo, J.hi};
    auto add = [&](double x) {
        double r = closed ? wrap(x, 1.0) : x;
        if (r > J.lo && r < J.hi) cuts.push_back(r);
    };
    for (double c : sp.critical_set) add(c);
    for (const auto& sub : sp.subpieces) {
        add(sub.lo);
        add(sub.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    IvSet out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double u = cuts[i], v = cuts[i + 1];
        if (!(v - u > 1e-15)) continue;
        double mid = 0.5 * (u + v);
        auto m = map.try_eval(mid);
        if (!m) continue;
        auto endpoint = [&](double x) {
            auto r = map.try_eval(x);
            if (r) return *r;
            for (double frac : {1e-12, 1e-9, 1e-6}) {
                r = map.try_eval(x + frac * (mid - x));
                if (r) return *r;
            }
            return *m;
        };
        double a = endpoint(u), b = endpoint(v);
        double lo = std::min(a, b), hi = std::max(a, b);
        if (closed && !(*m >= lo && *m <= hi)) {
            for (const auto& piece : wrap_split(Interval{hi, lo + 1.0}, true)) out.push_back(piece);
        } else {
            out.push_back(Interval{lo, hi});
        }
    }
    return normalize(out);
}

namespace {

struct Layer {
    int map = 0;
    IvSet region;
};

struct Propagated {
    Density seed;
    IvSet seed_region;
    std::vector<Layer> layers;
    std::vector<ChordMap> maps;
    bool closed = false;

    cplx eval(double s, int upto) const {
        double x = closed ? wrap(s, 1.0) : s;
        if (member(seed_region, x)) return seed(x);
        for (int L = 0; L < upto; ++L) {
            if (!member(layers[L].region, x)) continue;
            const ChordMap& M = maps[layers[L].map];
            std::optional<double> t;
            try {
                t = M.try_eval(x);
            } catch (const Error&) {
                return 0.0;
            }
            if (!t) return 0.0;
            double p = abs_projection_speed(M.curve(), M.theta(), x);
            double pt = abs_projection_speed(M.curve(), M.theta(), *t);
            double ratio = pt < 1e-14 ? 1.0 : p / pt;
            return -eval(*t, L) * ratio;
        }
        return 0.0;
    }
};

} // namespace

PropagationResult propagate_density(const Density& seed, const std::vector<Interval>& region,
                                    const std::vector<ChordMap>& maps, const Curve& curve, PropagationOptions opt) {
    if (maps.empty()) throw Error(ErrorKind::InvalidSpec, "propagation needs at least one map");
    const bool closed = curve.closed();
    auto st = std::make_shared<Propagated>();
    st->seed = seed;
    st->maps = maps;
    st->closed = closed;
    IvSet reg;
    for (const auto& iv : region)
        for (const auto& w : wrap_split(iv, closed)) reg.push_back(w);
    st->seed_region = normalize(reg);

    PropagationResult res;
    IvSet covered = st->seed_region;
    std::set<double> points(seed.breakpoints().begin(), seed.breakpoints().end());
    for (const auto& iv : covered) points.insert({iv.lo, iv.hi});

    int idle = 0;
    for (int layer = 0; layer < opt.max_layers && idle < static_cast<int>(maps.size()); ++layer) {
        int mi = layer % static_cast<int>(maps.size());
        const ChordMap& M = maps[mi];
        // mass sitting in I0 of this map cannot be mirrored
        IvSet i0 = normalize(M.split().I0);
        for (const auto& iv : intersect(covered, i0)) {
            bool mass = false;
            for (int k = 1; k <= 9 && !mass; ++k)
                mass = std::abs(st->eval(iv.lo + (iv.hi - iv.lo) * k / 10.0, static_cast<int>(st->layers.size()))) > 0;
            if (mass) {
                std::ostringstream os;
                os << "density is nonzero on [" << iv.lo << ", " << iv.hi << "] inside I0 of map " << mi
                   << "; relation truncated";
                res.warnings.push_back(os.str());
            }
        }
        IvSet img;
        for (const auto& iv : covered)
            for (const auto& w : chord_image(M, iv)) img.push_back(w);
        IvSet fresh = subtract(normalize(img), covered);
        fresh.erase(std::remove_if(fresh.begin(), fresh.end(), [](const Interval& iv) { return iv.length() < 1e-12; }),
                    fresh.end());
        if (fresh.empty()) {
            ++idle;
            continue;
        }
        idle = 0;
        std::set<double> add;
        for (double p : points) {
            auto t = M.try_eval(p);
            if (t && member(fresh, *t)) add.insert(*t);
        }
        for (const auto& iv : fresh) add.insert({iv.lo, iv.hi});
        for (double c : M.split().critical_set) add.insert(c);
        points.insert(add.begin(), add.end());
        st->layers.push_back(Layer{mi, fresh});
        covered = normalize([&] {
            IvSet u = covered;
            u.insert(u.end(), fresh.begin(), fresh.end());
            return u;
        }());
    }

    IvSet remaining = subtract(normalize(curve.domain().intervals), covered);
    IvSet allowed;
    for (const auto& M : maps) allowed.insert(allowed.end(), M.split().I0.begin(), M.split().I0.end());
    remaining = subtract(remaining, normalize(allowed));
    double gap = total(remaining);
    if (gap > 1e-8) {
        std::ostringstream os;
        os << "seed region and its images leave " << gap << " of the domain uncovered";
        if (!opt.zero_fill) throw Error(ErrorKind::TilingGap, os.str());
        res.warnings.push_back(os.str() + "; filled with zero");
    }

    int nl = static_cast<int>(st->layers.size());
    std::vector<double> br(points.begin(), points.end());
    res.density = Density::from_function([st, nl](double s) { return st->eval(s, nl); }, covered, br,
                                         closed ? std::optional<double>(1.0) : std::nullopt, "propagated");
    res.covered = covered;
    res.layers = nl;
    return res;
}

// ---------------------------------------------------------------- counterexamples

namespace {

double relation_scale(const Density& f, const Curve& curve) {
    return std::max(1.0, l1_norm(f, curve));
}

void verify_relations(Counterexample& ce, double tol) {
    ce.residual1 = eqfund_residual(ce.density, ce.curve, ce.theta1);
    ce.residual2 = eqfund_residual(ce.density, ce.curve, ce.theta2);
    double scale = relation_scale(ce.density, ce.curve);
    if (ce.residual1 > tol * scale || ce.residual2 > tol * scale) {
        std::ostringstream os;
        os << "constructed density does not satisfy the level-set relations (residuals " << ce.residual1 << ", "
           << ce.residual2 << ")";
        throw Error(ErrorKind::StructureAbsent, os.str());
    }
}

Counterexample circle_rational(const CounterexampleSpec& spec) {
    if (spec.q < 1) throw Error(ErrorKind::InvalidSpec, "q must be >= 1");
    Counterexample ce;
    ce.kind = "circle_rational";
    ce.curve = Curve::circle();
    const int q = spec.q;
    ce.theta1 = Angle(0.0);
    ce.theta2 = Angle(kPi / q);
    const double cell = 1.0 / q, half = 0.5 / q;
    std::function<double(double)> g;
    if (spec.profile == "sin") {
        g = [q](double t) { return std::sin(kTwoPi * q * t); };
    } else if (spec.profile == "bump") {
        g = [half](double t) { return bump(2.0 * t / half - 1.0); };
    } else {
        throw Error(ErrorKind::InvalidSpec, "unknown seed profile '" + spec.profile + "'");
    }
    auto f = [g, cell, half](double s) -> cplx {
        double t = wrap(s, cell);
        return t < half ? g(t) : -g(cell - t);
    };
    std::vector<double> br;
    for (int k = 0; k <= 2 * q; ++k) br.push_back(k * half);
    ce.density = Density::from_function(f, {Interval{0.0, 1.0}}, br, 1.0, "circle_rational");
    ce.seed_region = {Interval{0.0, half}};
    if (spec.profile != "sin") ce.density = ce.density.scaled(1.0 / l1_norm(ce.density, ce.curve));
    ce.l1 = l1_norm(ce.density, ce.curve);
    verify_relations(ce, 1e-9);
    return ce;
}

Counterexample hyperbola_conjugate(const CounterexampleSpec& spec) {
    Counterexample ce;
    ce.kind = "hyperbola_perpendicular";
    ce.curve = Curve(HyperbolaSpec{spec.window});
    double th1 = spec.theta1 - kPi * std::round(spec.theta1 / kPi); // (-pi/2, pi/2]
    if (!(std::abs(th1) > kPi / 4 + 1e-12 && std::abs(th1) < kPi / 2 - 1e-12))
        throw Error(ErrorKind::StructureAbsent, "the conjugate pivot construction needs pi/4 < |theta1| < pi/2");
    double th2 = th1 > 0 ? kPi / 2 - th1 : -kPi / 2 - th1; // tan th1 tan th2 = 1
    ce.theta1 = Angle(th1);
    ce.theta2 = Angle(th2);
    ChordMap m1(ce.curve, ce.theta1), m2(ce.curve, ce.theta2);
    const auto& crit = m1.split().critical_set;
    if (crit.empty()) throw Error(ErrorKind::StructureAbsent, "no tangency for theta1");
    double c = crit.front();
    const Interval* home = nullptr;
    for (const auto& iv : ce.curve.domain().intervals)
        if (c >= iv.lo && c <= iv.hi) home = &iv;
    if (!home) throw Error(ErrorKind::StructureAbsent, "tangency outside the window");
    double lo = home->lo + 0.25 * (c - home->lo), hi = c;
    auto seed_fn = [lo, hi](double s) -> cplx { return bump(2.0 * (s - lo) / (hi - lo) - 1.0); };
    Density seed = Density::from_function(seed_fn, {Interval{lo, hi}}, {lo, hi}, std::nullopt, "bump");
    ce.seed_region = {Interval{lo, hi}};
    PropagationOptions po;
    po.zero_fill = true;
    auto pr = propagate_density(seed, ce.seed_region, {m1, m2}, ce.curve, po);
    ce.warnings = pr.warnings;
    ce.density = pr.density.scaled(1.0 / l1_norm(pr.density, ce.curve));
    ce.l1 = l1_norm(ce.density, ce.curve);
    verify_relations(ce, 1e-8);
    return ce;
}

Counterexample generic_periodic(const CounterexampleSpec& spec) {
    if (!spec.curve) throw Error(ErrorKind::InvalidSpec, "generic_periodic needs a curve");
    Counterexample ce;
    ce.kind = "generic_periodic";
    ce.curve = *spec.curve;
    ce.theta1 = Angle(spec.theta1);
    ce.theta2 = Angle(spec.theta2);
    ChordMap m1(ce.curve, ce.theta1), m2(ce.curve, ce.theta2);
    CircleMapLift lift = compose_and_lift(m1, m2);
    auto orbit = detect_periodic_orbit(lift, 64, 1e-10);
    if (!orbit) throw Error(ErrorKind::StructureAbsent, "no periodic orbit up to period 64");
    const int q = orbit->period;

    auto group_spread = [&](double x0) {
        std::vector<double> pts{x0};
        double y = x0;
        for (int k = 0; k < 2 * q - 1; ++k) {
            y = (k % 2 == 0) ? m1.eval(y) : m2.eval(y);
            pts.push_back(y);
        }
        double dmin = 1.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                double d = std::abs(pts[i] - pts[j]);
                dmin = std::min(dmin, std::min(d, 1.0 - d));
            }
        return dmin;
    };
    double x0 = spec.x0.value_or(orbit->points.front()), best = -1;
    if (!spec.x0) {
        double base = orbit->points.front();
        for (int k = 0; k < 16; ++k) {
            double cand = wrap(base + 0.0137 * k, 1.0);
            double d = group_spread(cand);
            if (d > best) {
                best = d;
                x0 = cand;
            }
        }
    } else {
        best = group_spread(x0);
    }
    if (best < 1e-6) throw Error(ErrorKind::StructureAbsent, "periodic orbit images collide");
    double w = std::min(0.25 * best, 0.05);
    auto seed_fn = [x0, w](double s) -> cplx {
        double d = wrap(s - x0 + 0.5, 1.0) - 0.5;
        return bump(d / w);
    };
    Density seed = Density::from_function(seed_fn, wrap_split(Interval{x0 - w, x0 + w}, true),
                                          {wrap(x0 - w, 1.0), wrap(x0 + w, 1.0)}, 1.0, "bump");
    ce.seed_region = wrap_split(Interval{x0 - w, x0 + w}, true);
    PropagationOptions po;
    po.zero_fill = true;
    po.max_layers = 2 * q;
    auto pr = propagate_density(seed, ce.seed_region, {m1, m2}, ce.curve, po);
    ce.warnings = pr.warnings;
    ce.density = pr.density.scaled(1.0 / l1_norm(pr.density, ce.curve));
    ce.l1 = l1_norm(ce.density, ce.curve);
    verify_relations(ce, 1e-8);
    return ce;
}

} // namespace

Counterexample construct_counterexample(const CounterexampleSpec& spec) {
    std::string k = spec.kind;
    std::replace(k.begin(), k.end(), '-', '_');
    if (k == "circle_rational") return circle_rational(spec);
    if (k == "hyperbola_perpendicular" || k == "hyperbola_conjugate") return hyperbola_conjugate(spec);
    if (k == "generic_periodic") return generic_periodic(spec);
    throw Error(ErrorKind::InvalidSpec, "unknown counterexample kind '" + spec.kind + "'");
}

// ---------------------------------------------------------------- annihilator search

namespace {

struct GridOperator {
    std::vector<Eigen::Index> i0, i1;
    std::vector<double> w1, r;
    std::vector<bool> zero;
};

// linear interpolation stencil of parameter t on the domain grid
void stencil(const Curve& curve, const Eigen::VectorXd& x, double t, Eigen::Index& a, Eigen::Index& b, double& w) {
    const Eigen::Index n = x.size();
    if (curve.closed()) {
        double u = wrap(t, 1.0) * static_cast<double>(n);
        double fl = std::floor(u);
        a = static_cast<Eigen::Index>(fl) % n;
        b = (a + 1) % n;
        w = u - fl;
        return;
    }
    const Interval* in = nullptr;
    for (const auto& iv : curve.domain().intervals)
        if (t >= iv.lo && t <= iv.hi) in = &iv;
    const double* p = x.data();
    Eigen::Index i = std::upper_bound(p, p + n, t) - p;
    if (i == 0) {
        a = b = 0;
        w = 0;
    } else if (i == n) {
        a = b = n - 1;
        w = 0;
    } else if (in && x[i - 1] < in->lo) {
        a = b = i;
        w = 0;
    } else if (in && x[i] > in->hi) {
        a = b = i - 1;
        w = 0;
    } else {
        a = i - 1;
        b = i;
        w = (t - x[i - 1]) / (x[i] - x[i - 1]);
    }
}

GridOperator build_operator(const Curve& curve, Angle theta, const Eigen::VectorXd& x) {
    ChordMap M(curve, theta);
    GridOperator op;
    const Eigen::Index n = x.size();
    op.i0.resize(n);
    op.i1.resize(n);
    op.w1.resize(n);
    op.r.resize(n);
    op.zero.assign(n, false);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::optional<double> t;
        try {
            t = M.try_eval(x[i]);
        } catch (const Error&) {
            t.reset();
        }
        if (!t) {
            op.zero[i] = true;
            op.i0[i] = op.i1[i] = i;
            op.w1[i] = 0;
            op.r[i] = 0;
            continue;
        }
        stencil(curve, x, *t, op.i0[i], op.i1[i], op.w1[i]);
        double p = abs_projection_speed(curve, theta, x[i]);
        double pt = abs_projection_speed(curve, theta, *t);
        op.r[i] = p + pt < 1e-300 ? 0.5 : p / (p + pt);
    }
    return op;
}

void apply(const GridOperator& op, const Eigen::VectorXd& f, Eigen::VectorXd& out) {
    const Eigen::Index n = f.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (op.zero[i]) {
            out[i] = 0;
            continue;
        }
        double partner = (1.0 - op.w1[i]) * f[op.i0[i]] + op.w1[i] * f[op.i1[i]];
        out[i] = op.r[i] * (f[i] - partner);
    }
}

Eigen::VectorXd cell_widths(const Curve& curve, const Eigen::VectorXd& x) {
    Eigen::VectorXd h(x.size());
    if (curve.closed()) {
        h.setConstant(1.0 / x.size());
        return h;
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        for (const auto& iv : curve.domain().intervals) {
            if (x[i] < iv.lo || x[i] > iv.hi) continue;
            Eigen::Index c = 0;
            for (Eigen::Index j = 0; j < x.size(); ++j)
                if (x[j] >= iv.lo && x[j] <= iv.hi) ++c;
            h[i] = iv.length() / c;
        }
    }
    return h;
}

Eigen::VectorXd random_seed(const Curve& curve, const Eigen::VectorXd& x, std::uint64_t seed, int modes) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(x.size());
    if (curve.closed()) {
        for (int k = 1; k <= modes; ++k) {
            double a = N(rng), b = N(rng);
            for (Eigen::Index i = 0; i < x.size(); ++i)
                f[i] += a * std::cos(kTwoPi * k * x[i]) + b * std::sin(kTwoPi * k * x[i]);
        }
        return f;
    }
    for (const auto& iv : curve.domain().intervals) {
        std::vector<double> c(modes + 1);
        for (auto& v : c) v = N(rng);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] < iv.lo || x[i] > iv.hi) continue;
            double u = (x[i] - iv.lo) / iv.length();
            for (int k = 0; k <= modes; ++k) f[i] += c[k] * std::cos(kPi * k * u);
        }
    }
    return f;
}

} // namespace

AnnihilatorResult annihilator_search(const Curve& curve, Angle theta1, Angle theta2, AnnihilatorOptions opt) {
    Eigen::VectorXd x = domain_grid(curve, opt.grid_size);
    GridOperator P1 = build_operator(curve, theta1, x), P2 = build_operator(curve, theta2, x);
    Eigen::VectorXd h = cell_widths(curve, x);
    Eigen::VectorXd f = random_seed(curve, x, opt.seed, opt.modes), g(x.size());

    AnnihilatorResult res;
    auto l1 = [&](const Eigen::VectorXd& v) { return v.cwiseAbs().dot(h); };
    double start = l1(f);
    res.l1_history.push_back(start);
    for (int it = 0; it < opt.iterations; ++it) {
        apply(P1, f, g);
        Eigen::VectorXd next(x.size());
        apply(P2, g, next);
        double change = (next - f).cwiseAbs().maxCoeff();
        double scale = next.cwiseAbs().maxCoeff();
        f.swap(next);
        res.l1_history.push_back(l1(f));
        res.iterations = it + 1;
        if (res.l1_history.back() <= opt.stop_ratio * start) break;
        if (change <= 1e-15 * std::max(scale, 1e-300)) {
            res.converged = true;
            break;
        }
    }
    res.ratio = start > 0 ? res.l1_history.back() / start : 0.0;
    Eigen::VectorXcd v = f.cast<cplx>();
    res.density = Density::from_grid(x, v, curve.domain().intervals, curve.closed());
    res.residual1 = eqfund_residual(res.density, curve, theta1);
    res.residual2 = eqfund_residual(res.density, curve, theta2);
    return res;
}

double projection_pass_change(const Density& f, const Curve& curve, Angle theta1, Angle theta2, int grid) {
    ChordMap m1(curve, theta1), m2(curve, theta2);
    auto ratio = [&](const ChordMap& M, double s, std::optional<double>& t) {
        try {
            t = M.try_eval(s);
        } catch (const Error&) {
            t.reset();
        }
        if (!t) return 0.0;
        double p = abs_projection_speed(curve, M.theta(), s), pt = abs_projection_speed(curve, M.theta(), *t);
        return p + pt < 1e-300 ? 0.5 : p / (p + pt);
    };
    auto P1 = [&](double s) -> cplx {
        std::optional<double> t;
        double r = ratio(m1, s, t);
        if (!t) return 0.0;
        return r * (f(s) - f(*t));
    };
    Eigen::VectorXd x = domain_grid(curve, grid);
    Eigen::VectorXd h = cell_widths(curve, x);
    double diff = 0, norm = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        std::optional<double> t;
        double r = ratio(m2, x[i], t);
        cplx v = t ? r * (P1(x[i]) - P1(*t)) : cplx(0.0);
        cplx fx = f(x[i]);
        diff += std::abs(v - fx) * h[i];
        norm += std::abs(fx) * h[i];
    }
    return norm > 0 ? diff / norm : diff;
}

MassInvariance mass_invariance_check(const Density& f, const ChordMap& map, const Interval& J, bool is_signed,
                                     double relation_tol) {
    const Curve& curve = map.curve();
    MassInvariance out;
    if (f.is_zero()) return out;
    double total_mass = l1_norm(f, curve);
    double res = eqfund_residual(f, curve, map.theta());
    if (res > relation_tol * std::max(1.0, total_mass)) {
        std::ostringstream os;
        os << "density violates the level-set relation for theta=" << map.theta().radians() << " (residual " << res
           << ")";
        throw Error(ErrorKind::RelationViolated, os.str());
    }
    auto integral = [&](const Interval& iv) {
        return is_signed ? integrate_density(f, curve, iv.lo, iv.hi).real() : integrate_abs(f, curve, iv.lo, iv.hi);
    };
    for (const auto& part : wrap_split(J, curve.closed())) {
        out.original += integral(part);
        for (const auto& img : chord_image(map, part)) out.image += integral(img);
    }
    if (is_signed) out.original = -out.original;
    return out;
}

} // namespace hup
