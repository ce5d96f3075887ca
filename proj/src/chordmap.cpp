#include "hup/chordmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hup {

double measure(const std::vector<Interval>& ivs) {
    double m = 0;
    for (const auto& iv : ivs) m += iv.length();
    return m;
}

double ProjectionSplit::I0_measure() const { return measure(I0); }

double ProjectionSplit::lift(double s, bool closed) const {
    if (!closed || pieces.empty()) return s;
    double c0 = pieces.front().lo;
    return c0 + wrap(s - c0, 1.0);
}

int ProjectionSplit::piece_of(double s, bool closed) const {
    double x = lift(s, closed);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const Piece& p = pieces[i];
        bool last_in_interval = (i + 1 == pieces.size()) || pieces[i + 1].lo != p.hi;
        if (x >= p.lo && (x < p.hi || (x == p.hi && last_in_interval && !closed))) return static_cast<int>(i);
    }
    return -1;
}

namespace {

double safe_dot(const Point2& v, const Point2& t) {
    double acc = 0;
    for (int k = 0; k < 2; ++k) {
        if (t[k] == 0.0) continue;
        acc += v[k] * t[k];
    }
    return acc;
}

double dproj(const Curve& c, const Point2& dir, double s, int side) {
    return safe_dot(c.eval_side(s, 1, side), dir);
}

int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

struct Sample {
    double s;
    double d;
    int seg;
};

std::vector<Interval> reduce_and_merge(std::vector<Interval> ivs, bool closed) {
    std::vector<Interval> out;
    for (const auto& iv : ivs) {
        if (iv.hi - iv.lo <= 0) continue;
        if (closed) {
            double lo = iv.lo, hi = iv.hi;
            double shift = std::floor(lo);
            lo -= shift;
            hi -= shift;
            if (hi > 1.0) {
                out.push_back(Interval{lo, 1.0});
                out.push_back(Interval{0.0, hi - 1.0});
            } else {
                out.push_back(Interval{lo, hi});
            }
        } else {
            out.push_back(iv);
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& iv : out) {
        if (!merged.empty() && iv.lo <= merged.back().hi + 1e-12) merged.back().hi = std::max(merged.back().hi, iv.hi);
        else merged.push_back(iv);
    }
    return merged;
}

} // namespace

ProjectionSplit projection_split(const Curve& curve, Angle theta) {
    ProjectionSplit sp;
    sp.theta = theta;
    const Point2 dir = theta.direction();
    const bool closed = curve.closed();
    const int M = 256;

    // smooth segments
    std::vector<Interval> segs;
    if (closed) {
        std::vector<double> b = curve.breakpoints();
        b.push_back(0.0);
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        for (std::size_t i = 0; i < b.size(); ++i) segs.push_back(Interval{b[i], i + 1 < b.size() ? b[i + 1] : 1.0});
    } else {
        for (const auto& iv : curve.domain().intervals) {
            double lo = iv.lo;
            for (double b : curve.breakpoints()) {
                if (b > iv.lo && b < iv.hi) {
                    segs.push_back(Interval{lo, b});
                    lo = b;
                }
            }
            segs.push_back(Interval{lo, iv.hi});
        }
    }

    std::vector<Sample> samples;
    for (std::size_t g = 0; g < segs.size(); ++g) {
        const auto& sg = segs[g];
        bool flat = true;
        for (int j = 0; j <= M; ++j) {
            double s = j == M ? sg.hi : sg.lo + (sg.hi - sg.lo) * j / M;
            int side = j == 0 ? +1 : (j == M ? -1 : 0);
            Point2 v = curve.eval_side(s, 1, side);
            double d = safe_dot(v, dir);
            double speed = v.allFinite() ? v.norm() : std::numeric_limits<double>::infinity();
            if (std::abs(d) > 1e-12 * speed) flat = false;
            samples.push_back(Sample{s, d, static_cast<int>(g)});
        }
        if (flat) {
            std::ostringstream os;
            os << "projection is constant on [" << sg.lo << ", " << sg.hi << "] (face normal to theta)";
            throw Error(ErrorKind::FaceNormalToTheta, os.str());
        }
    }

    // sign changes of the projection derivative
    std::vector<double> crit;
    auto handle = [&](const Sample& a, const Sample& b) {
        if (a.seg == b.seg && a.s < b.s) {
            auto f = [&](double s) { return dproj(curve, dir, s, 0); };
            crit.push_back(bisect_sign(f, a.s, b.s, a.d, 200));
        } else {
            // across a segment boundary: the boundary is an extremum (corner)
            double s = segs[a.seg].hi;
            crit.push_back(s);
        }
    };
    auto scan = [&](std::size_t begin, std::size_t end, bool cyclic) {
        std::size_t n = end - begin;
        std::size_t start = begin;
        while (start < end && samples[start].d == 0.0) ++start;
        if (start == end) return;
        std::size_t count = cyclic ? n : end - start;
        const Sample* last = &samples[start];
        for (std::size_t k = 1; k <= count; ++k) {
            std::size_t idx = cyclic ? begin + (start - begin + k) % n : start + k;
            if (!cyclic && idx >= end) break;
            const Sample& cur = samples[idx];
            if (cur.d == 0.0) continue;
            if (sgn(cur.d) != sgn(last->d)) handle(*last, cur);
            last = &cur;
        }
    };
    if (closed) {
        scan(0, samples.size(), true);
    } else {
        std::size_t pos = 0;
        for (const auto& iv : curve.domain().intervals) {
            std::size_t begin = pos;
            while (pos < samples.size() && samples[pos].s <= iv.hi && samples[pos].s >= iv.lo) ++pos;
            scan(begin, pos, false);
        }
    }
    for (double& c : crit) c = curve.reduce(c);
    std::sort(crit.begin(), crit.end());
    std::vector<double> uniq;
    for (double c : crit) {
        if (!uniq.empty() && std::abs(c - uniq.back()) <= 1e-13) continue;
        if (closed && !uniq.empty() && std::abs(c - 1.0 - uniq.front()) <= 1e-13) continue;
        uniq.push_back(c);
    }
    sp.critical_set = uniq;

    auto mk_piece = [&](double lo, double hi, bool lc, bool hc) {
        Piece p;
        p.lo = lo;
        p.hi = hi;
        p.lo_critical = lc;
        p.hi_critical = hc;
        double a = projection(curve, theta, lo), b = projection(curve, theta, hi);
        p.sign = b > a ? 1 : -1;
        p.vlo = std::min(a, b);
        p.vhi = std::max(a, b);
        sp.pieces.push_back(p);
    };
    if (closed) {
        if (uniq.empty()) throw Error(ErrorKind::InvalidSpec, "closed curve projection without critical points");
        for (std::size_t i = 0; i < uniq.size(); ++i)
            mk_piece(uniq[i], i + 1 < uniq.size() ? uniq[i + 1] : uniq.front() + 1.0, true, true);
    } else {
        for (const auto& iv : curve.domain().intervals) {
            double lo = iv.lo;
            bool lc = false;
            for (double c : uniq) {
                if (c > iv.lo && c < iv.hi) {
                    mk_piece(lo, c, lc, true);
                    lo = c;
                    lc = true;
                }
            }
            mk_piece(lo, iv.hi, lc, false);
        }
    }

    // preimage multiplicity over elementary value bands
    std::vector<double> vals;
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (const auto& p : sp.pieces) {
        vals.push_back(p.vlo);
        vals.push_back(p.vhi);
        vmin = std::min(vmin, p.vlo);
        vmax = std::max(vmax, p.vhi);
    }
    std::sort(vals.begin(), vals.end());
    double vtol = 1e-13 * std::max(1.0, vmax - vmin);
    std::vector<double> bands;
    for (double v : vals)
        if (bands.empty() || v - bands.back() > vtol) bands.push_back(v);

    std::vector<Interval> i0, im, ip, mf;
    for (std::size_t k = 0; k + 1 < bands.size(); ++k) {
        double mid = 0.5 * (bands[k] + bands[k + 1]);
        std::vector<int> cover;
        for (std::size_t i = 0; i < sp.pieces.size(); ++i)
            if (sp.pieces[i].vlo < mid && mid < sp.pieces[i].vhi) cover.push_back(static_cast<int>(i));
        int mult = static_cast<int>(cover.size());
        sp.fold_count = std::max(sp.fold_count, mult);
        for (std::size_t r = 0; r < cover.size(); ++r) {
            int i = cover[r];
            double x0 = solve_on_piece(curve, sp, i, bands[k]);
            double x1 = solve_on_piece(curve, sp, i, bands[k + 1]);
            // keep lifted coordinates of the piece
            double lo = sp.lift(std::min(x0, x1), closed), hi = sp.lift(std::max(x0, x1), closed);
            const Piece& P = sp.pieces[i];
            auto clampl = [&](double x) {
                if (!closed) return x;
                while (x < P.lo - 1e-12) x += 1.0;
                while (x > P.hi + 1e-12) x -= 1.0;
                return std::clamp(x, P.lo, P.hi);
            };
            double a = clampl(sp.lift(x0, closed)), b = clampl(sp.lift(x1, closed));
            lo = std::min(a, b);
            hi = std::max(a, b);
            SubPiece sub{lo, hi, mult, i, 0};
            if (mult == 1) sub.label = 0;
            else if (mult == 2) sub.label = r == 0 ? -1 : +1;
            else sub.label = 3;
            sp.subpieces.push_back(sub);
            Interval iv{lo, hi};
            (sub.label == 0 ? i0 : sub.label == -1 ? im : sub.label == 1 ? ip : mf).push_back(iv);
        }
    }
    sp.I0 = reduce_and_merge(i0, closed);
    sp.Iminus = reduce_and_merge(im, closed);
    sp.Iplus = reduce_and_merge(ip, closed);
    sp.multi = reduce_and_merge(mf, closed);
    return sp;
}

double solve_on_piece(const Curve& curve, const ProjectionSplit& split, int piece, double zeta) {
    const Piece& P = split.pieces[piece];
    const Angle theta = split.theta;
    double lo_val = projection(curve, theta, P.lo);
    double hi_val = projection(curve, theta, P.hi);
    if (P.sign > 0 ? zeta <= lo_val : zeta >= lo_val) return curve.reduce(P.lo);
    if (P.sign > 0 ? zeta >= hi_val : zeta <= hi_val) return curve.reduce(P.hi);

    auto f = [&](double s) { return projection(curve, theta, s) - zeta; };
    double a = P.lo, b = P.hi, fa = lo_val - zeta, fb = hi_val - zeta;
    // narrow to one smooth segment
    for (double br : curve.breakpoints()) {
        for (double shift : {-1.0, 0.0, 1.0, 2.0}) {
            double x = br + shift;
            if (!curve.closed() && shift != 0.0) continue;
            if (x > a && x < b) {
                double fx = f(x);
                if (fx == 0.0) return curve.reduce(x);
                if ((fx < 0) == (fa < 0)) {
                    a = x;
                    fa = fx;
                } else {
                    b = x;
                    fb = fx;
                }
            }
        }
    }
    double s;
    if (curve.piecewise_linear()) {
        s = a + (b - a) * (-fa) / (fb - fa);
    } else {
        s = solve_bracketed(f, a, b, fa, fb);
    }
    return curve.reduce(s);
}

std::vector<double> level_set_solve(const Curve& curve, const ProjectionSplit& split, double zeta) {
    std::vector<double> out;
    for (std::size_t i = 0; i < split.pieces.size(); ++i) {
        const Piece& p = split.pieces[i];
        if (zeta >= p.vlo && zeta <= p.vhi) out.push_back(solve_on_piece(curve, split, static_cast<int>(i), zeta));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> level_set_solve(const Curve& curve, Angle theta, double zeta) {
    return level_set_solve(curve, projection_split(curve, theta), zeta);
}

std::vector<double> tangency_points(const Curve& curve, Angle theta) {
    auto sp = projection_split(curve, theta);
    std::vector<double> out;
    for (double c : sp.critical_set) {
        bool corner = false;
        for (double b : curve.breakpoints())
            if (std::abs(b - c) <= 1e-13) corner = true;
        if (!corner) out.push_back(c);
        else if (std::abs(dproj(curve, theta.direction(), c, -1)) <= 1e-12 ||
                 std::abs(dproj(curve, theta.direction(), c, +1)) <= 1e-12)
            out.push_back(c);
    }
    return out;
}

ChordMap::ChordMap(Curve curve, Angle theta, ChordMapOptions options)
    : curve_(std::move(curve)), theta_(theta), opt_(options) {
    split_ = std::make_shared<const ProjectionSplit>(projection_split(curve_, theta_));
    if (!opt_.force_numeric) {
        if (auto e = std::get_if<EllipseSpec>(&curve_.spec())) {
            Point2 u = Eigen::Rotation2Dd(-e->rotation) * theta_.direction();
            phase_ = std::atan2(e->b * u.y(), e->a * u.x());
            closed_form_ = true;
        }
    }
}

std::optional<double> ChordMap::try_eval(double s) const {
    if (closed_form_) return wrap(phase_ / kPi - s, 1.0);
    const bool closed = curve_.closed();
    if (!curve_.in_domain(s)) {
        std::ostringstream os;
        os << "parameter " << s << " outside the domain";
        throw Error(ErrorKind::OutOfDomain, os.str());
    }
    const ProjectionSplit& sp = *split_;
    double u = curve_.reduce(s);
    for (double c : sp.critical_set) {
        double d = std::abs(u - c);
        if (closed) d = std::min(d, 1.0 - d);
        if (d <= 1e-15) return c;
    }
    int i = sp.piece_of(u, closed);
    if (i < 0) throw Error(ErrorKind::OutOfDomain, "parameter not covered by any monotone piece");
    const Piece& P = sp.pieces[i];
    double x = sp.lift(u, closed);

    // tangency neighbourhood: reflect through the fold
    bool on_break = false;
    for (double b : curve_.breakpoints())
        if (std::abs(b - u) <= 1e-15) on_break = true;
    if (!on_break) {
        double d = projection_derivative(curve_, theta_, u);
        if (std::abs(d) < opt_.tangency_threshold) {
            double c = std::numeric_limits<double>::quiet_NaN();
            if (P.lo_critical && (!P.hi_critical || x - P.lo <= P.hi - x)) c = P.lo;
            else if (P.hi_critical) c = P.hi;
            if (std::isfinite(c)) {
                double r = 2.0 * c - x;
                if (curve_.in_domain(r)) return curve_.reduce(r);
            }
        }
    }

    double z = projection(curve_, theta_, u);
    std::optional<double> found;
    for (std::size_t j = 0; j < sp.pieces.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        const Piece& Q = sp.pieces[j];
        if (z < Q.vlo || z > Q.vhi) continue;
        double r = solve_on_piece(curve_, sp, static_cast<int>(j), z);
        if (found) {
            double d = std::abs(*found - r);
            if (closed) d = std::min(d, 1.0 - d);
            if (d > 1e-12) throw Error(ErrorKind::MultiFold, "more than one partner preimage; use cusp_maps");
        } else {
            found = r;
        }
    }
    return found;
}

double ChordMap::eval(double s) const {
    auto r = try_eval(s);
    if (!r) {
        std::ostringstream os;
        os << "parameter " << s << " has a unique preimage (I0)";
        throw Error(ErrorKind::InI0, os.str());
    }
    return *r;
}

double ChordMap::derivative(double s) const {
    if (closed_form_) return -1.0;
    double p = eval(s);
    double d = projection_derivative(curve_, theta_, s);
    if (std::abs(d) < opt_.tangency_threshold) return -1.0;
    return d / projection_derivative(curve_, theta_, p);
}

double CuspMaps::phi(double s) const {
    double z = projection(curve, theta, s);
    return solve_on_piece(curve, split, middle_piece, z);
}

double CuspMaps::psi(double s) const {
    double z = projection(curve, theta, s);
    return solve_on_piece(curve, split, far_piece, z);
}

CuspMaps cusp_maps(const Curve& curve, Angle theta) {
    if (!std::holds_alternative<GraphSpec>(curve.spec())) throw Error(ErrorKind::NotCuspRegime, "cusp maps need a graph curve");
    auto corners = curve.corners();
    if (corners.empty()) throw Error(ErrorKind::NotCuspRegime, "graph has no cusp");
    ProjectionSplit sp = projection_split(curve, theta);
    if (sp.fold_count < 3 || sp.pieces.size() != 3) throw Error(ErrorKind::NotCuspRegime, "theta is not in the three-fold regime");
    double cusp = corners.front();
    CuspMaps cm{theta, cusp, 0, 0, 0, curve, sp};
    cm.middle_piece = 1;
    bool cusp_left = std::abs(sp.pieces[0].hi - cusp) <= 1e-13;
    bool cusp_right = std::abs(sp.pieces[1].hi - cusp) <= 1e-13;
    if (!cusp_left && !cusp_right) throw Error(ErrorKind::NotCuspRegime, "cusp is not a piece boundary");
    cm.near_piece = cusp_left ? 0 : 2;
    cm.far_piece = cusp_left ? 2 : 0;
    cm.b = cusp_left ? sp.pieces[1].hi : sp.pieces[0].hi;
    const Piece& mid = sp.pieces[1];
    const Piece& nearp = sp.pieces[cm.near_piece];
    const Piece& farp = sp.pieces[cm.far_piece];
    if (!(mid.vlo >= nearp.vlo && mid.vhi <= nearp.vhi && mid.vlo >= farp.vlo && mid.vhi <= farp.vhi))
        throw Error(ErrorKind::NotCuspRegime, "middle branch range is not covered three times");
    cm.a = solve_on_piece(curve, sp, cm.far_piece, projection(curve, theta, cusp));
    cm.c = solve_on_piece(curve, sp, cm.near_piece, projection(curve, theta, cm.b));
    return cm;
}

bool single_line_hup_check(const Curve& curve, Angle theta) {
    try {
        return projection_split(curve, theta).fold_count == 1;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::FaceNormalToTheta) return false;
        throw;
    }
}

} // namespace hup
