#include "hup/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

using namespace hup;

namespace {

struct RunConfig {
    std::string curve;
    double theta = 0.0, theta1 = 0.0, theta2 = 1.0;
    long n = 10000;
    long horizon = 10000;
    int period_cap = 64;
    int k = 1;
    long n_limit = 100000;
    std::optional<double> tol;
    std::vector<double> interval;
    std::vector<double> t_range{-50.0, 50.0};
    int t_count = 501;
    std::vector<double> xi_range{-20.0, 20.0};
    int xi_count = 81;
    int zeta_count = 2001;
    double x0 = 0.0;
    std::optional<double> sigma0;
    double alpha0 = 2.0;
    std::string out;
    std::uint64_t seed = 20240611ULL;
    int grid = 4096;
    int iterations = 10000;
    std::string kind = "circle-rational";
    int q = 2;
    std::string profile = "sin";
    bool verify = false;
    std::string density;
    std::vector<double> lines;
    double a = 2.0, b = 1.0;
};

double default_tol(double fallback) {
    if (const char* env = std::getenv("HUP_DEFAULT_TOL")) {
        try {
            double v = std::stod(env);
            if (v > 0) return v;
        } catch (...) {
        }
        throw Error(ErrorKind::InvalidSpec, "HUP_DEFAULT_TOL must be a positive number");
    }
    return fallback;
}

double tol_of(const RunConfig& c, double fallback) {
    double t = c.tol ? *c.tol : default_tol(fallback);
    if (!(t > 0)) throw Error(ErrorKind::InvalidSpec, "tolerances must be positive");
    return t;
}

std::string csv_path(const RunConfig& c, const std::string& tag) {
    if (c.out.empty()) return {};
    std::filesystem::path p(c.out);
    p.replace_extension();
    return p.string() + "." + tag + ".csv";
}

void need_distinct(const RunConfig& c) {
    double d = wrap(c.theta1 - c.theta2, kPi);
    if (d < 1e-12 || kPi - d < 1e-12) throw Error(ErrorKind::SameAngle, "theta1 and theta2 must differ mod pi");
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

IntervalMap composed_map(const Curve& curve, const RunConfig& c) {
    ChordMap m1(curve, Angle(c.theta1)), m2(curve, Angle(c.theta2));
    if (curve.closed()) return as_interval_map(compose_and_lift(m1, m2));
    return as_interval_map(m1, m2);
}

bool is_certificate_failure(ErrorKind k) {
    switch (k) {
    case ErrorKind::Overlap:
    case ErrorKind::NotContained:
    case ErrorKind::StructureAbsent:
    case ErrorKind::HypothesesFail:
    case ErrorKind::RelationViolated:
    case ErrorKind::NotCuspRegime:
        return true;
    default:
        return false;
    }
}

// returns the exit status
int run(const std::string& cmd, const RunConfig& c, Report& rep) {
    Json& in = rep.inputs;
    Json& res = rep.results;
    auto curve_in = [&]() {
        Curve cv = load_curve(c.curve);
        in["curve"] = curve_to_json(cv);
        return cv;
    };

    if (cmd == "split") {
        Curve cv = curve_in();
        in["theta"] = c.theta;
        res = to_json(projection_split(cv, Angle(c.theta)));
        return 0;
    }
    if (cmd == "hup-one-line") {
        Curve cv = curve_in();
        in["theta"] = c.theta;
        res["hup"] = single_line_hup_check(cv, Angle(c.theta));
        return 0;
    }
    if (cmd == "cusp") {
        Curve cv = curve_in();
        in["theta"] = c.theta;
        res = to_json(cusp_maps(cv, Angle(c.theta)));
        return 0;
    }
    if (cmd == "ellipse-reduce") {
        in["a"] = c.a;
        in["b"] = c.b;
        in["theta1"] = c.theta1;
        in["theta2"] = c.theta2;
        res = to_json(ellipse_to_circle(c.a, c.b, Angle(c.theta1), Angle(c.theta2)));
        return 0;
    }

    in["theta1"] = c.theta1;
    in["theta2"] = c.theta2;

    if (cmd == "orbit") {
        Curve cv = curve_in();
        in["x0"] = c.x0;
        in["n"] = c.n;
        need_distinct(c);
        std::vector<double> pts;
        bool escaped = false;
        if (cv.closed()) {
            ChordMap m1(cv, Angle(c.theta1)), m2(cv, Angle(c.theta2));
            pts = orbit(compose_and_lift(m1, m2), c.x0, c.n);
        } else {
            IntervalMap f = composed_map(cv, c);
            pts.push_back(c.x0);
            for (long i = 0; i < c.n; ++i) {
                try {
                    pts.push_back(f.f(pts.back()));
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::InI0 && e.kind() != ErrorKind::OutOfDomain) throw;
                    escaped = true;
                    break;
                }
            }
        }
        res["steps"] = static_cast<long>(pts.size()) - 1;
        res["final"] = pts.back();
        res["left_domain"] = escaped;
        if (std::string p = csv_path(c, "orbit"); !p.empty()) {
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                double s = cv.reduce(pts[i]);
                Point2 g = cv.eval(s);
                rows.push_back({static_cast<double>(i), pts[i], g.x(), g.y()});
            }
            write_csv(p, {"step", "s", "x", "y"}, rows);
            res["csv"] = std::filesystem::path(p).filename().string();
        }
        return 0;
    }
    if (cmd == "rotation") {
        Curve cv = curve_in();
        in["x0"] = c.x0;
        in["n"] = c.n;
        in["period_cap"] = c.period_cap;
        auto lift = compose_and_lift(ChordMap(cv, Angle(c.theta1)), ChordMap(cv, Angle(c.theta2)));
        res = to_json(rotation_number(lift, c.x0, c.n, c.period_cap));
        return 0;
    }
    if (cmd == "periodic") {
        Curve cv = curve_in();
        double tol = tol_of(c, 1e-10);
        in["max_period"] = c.period_cap;
        in["tol"] = tol;
        auto lift = compose_and_lift(ChordMap(cv, Angle(c.theta1)), ChordMap(cv, Angle(c.theta2)));
        auto o = detect_periodic_orbit(lift, c.period_cap, tol);
        res["found"] = o.has_value();
        res["orbit"] = o ? to_json(*o) : Json(nullptr);
        return 0;
    }
    if (cmd == "wandering" || cmd == "attract") {
        Curve cv = curve_in();
        if (c.interval.size() != 2) throw Error(ErrorKind::InvalidSpec, "--interval needs two values");
        in["interval"] = c.interval;
        need_distinct(c);
        IntervalMap f = composed_map(cv, c);
        IntervalCertificate cert;
        if (cmd == "wandering") {
            in["horizon"] = c.horizon;
            cert = certify_wandering(f, c.interval[0], c.interval[1], c.horizon);
        } else {
            in["k"] = c.k;
            in["n_limit"] = c.n_limit;
            cert = certify_attractive(f, c.interval[0], c.interval[1], c.k, c.n_limit);
        }
        res = to_json(cert);
        if (std::string p = csv_path(c, "certificate"); !p.empty()) {
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < cert.orbit.size(); ++i)
                rows.push_back({static_cast<double>(i), cert.orbit[i].first, cert.orbit[i].second});
            write_csv(p, {"step", "lo", "hi"}, rows);
            res["csv"] = std::filesystem::path(p).filename().string();
        }
        return 0;
    }
    if (cmd == "sigma") {
        Curve cv = curve_in();
        in["n"] = c.n;
        in["sigma0"] = c.sigma0 ? Json(*c.sigma0) : Json(nullptr);
        auto s = sigma_sequence(cv, Angle(c.theta1), Angle(c.theta2), c.sigma0, static_cast<int>(c.n));
        res = to_json(s);
        return 0;
    }
    if (cmd == "annihilate") {
        Curve cv = curve_in();
        need_distinct(c);
        AnnihilatorOptions o;
        o.grid_size = c.grid;
        o.iterations = c.iterations;
        o.seed = c.seed;
        in["grid"] = o.grid_size;
        in["iterations"] = o.iterations;
        in["seed"] = o.seed;
        in["modes"] = o.modes;
        auto r = annihilator_search(cv, Angle(c.theta1), Angle(c.theta2), o);
        res = {{"ratio", r.ratio},
               {"iterations", r.iterations},
               {"converged", r.converged},
               {"initial_l1", r.l1_history.front()},
               {"final_l1", r.l1_history.back()},
               {"residuals", {r.residual1, r.residual2}}};
        if (std::string p = csv_path(c, "l1"); !p.empty()) {
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < r.l1_history.size(); ++i) rows.push_back({static_cast<double>(i), r.l1_history[i]});
            write_csv(p, {"iteration", "l1"}, rows);
            res["csv"] = std::filesystem::path(p).filename().string();
        }
        return 0;
    }
    if (cmd == "counterexample") {
        CounterexampleSpec spec;
        spec.kind = c.kind;
        spec.q = c.q;
        spec.profile = c.profile;
        spec.theta1 = c.theta1;
        spec.theta2 = c.theta2;
        in["kind"] = c.kind;
        in["q"] = c.q;
        in["profile"] = c.profile;
        if (!c.curve.empty()) spec.curve = curve_in();
        auto ce = construct_counterexample(spec);
        res = {{"kind", ce.kind},
               {"curve", curve_to_json(ce.curve)},
               {"theta1", ce.theta1.radians()},
               {"theta2", ce.theta2.radians()},
               {"l1", ce.l1},
               {"residuals", {ce.residual1, ce.residual2}},
               {"warnings", ce.warnings},
               {"density", density_to_json(ce.density, ce.curve, c.grid > 0 ? std::max(c.grid, 8192) : 8192)}};
        if (c.verify) {
            double tol = tol_of(c, ce.kind == "circle_rational" ? 1e-8 : 1e-6);
            in["t_range"] = c.t_range;
            in["t_count"] = c.t_count;
            in["tol"] = tol;
            auto rep2 = check_annihilation(ce.density, ce.curve, {ce.theta1, ce.theta2}, c.t_range[0], c.t_range[1], c.t_count);
            res["verification"] = to_json(rep2);
            bool ok = ce.l1 >= 0.1;
            for (const auto& l : rep2.lines) ok = ok && l.max_modulus <= tol;
            res["verified"] = ok;
            return ok ? 0 : 2;
        }
        return 0;
    }
    if (cmd == "verify" || cmd == "radon" || cmd == "slice-check") {
        Curve cv = curve_in();
        if (c.density.empty()) throw Error(ErrorKind::InvalidSpec, "--density is required");
        Density f = load_density(c.density);
        in["density"] = std::filesystem::path(c.density).filename().string();
        if (cmd == "verify") {
            double tol = tol_of(c, 1e-8);
            std::vector<Angle> ls;
            for (double t : c.lines) ls.push_back(Angle(t));
            if (ls.empty()) ls = {Angle(c.theta1), Angle(c.theta2)};
            in["lines"] = c.lines.empty() ? std::vector<double>{c.theta1, c.theta2} : c.lines;
            in["t_range"] = c.t_range;
            in["t_count"] = c.t_count;
            in["tol"] = tol;
            auto r = check_annihilation(f, cv, ls, c.t_range[0], c.t_range[1], c.t_count);
            res = to_json(r);
            bool ok = true;
            for (const auto& l : r.lines) ok = ok && l.max_modulus <= tol;
            res["annihilated"] = ok;
            if (std::string p = csv_path(c, "fourier"); !p.empty()) {
                std::vector<std::vector<double>> rows;
                for (std::size_t li = 0; li < r.lines.size(); ++li)
                    for (std::size_t i = 0; i < r.lines[li].t.size(); ++i) {
                        cplx v = r.lines[li].values[i];
                        rows.push_back({static_cast<double>(li), r.lines[li].t[i], v.real(), v.imag(), std::abs(v)});
                    }
                write_csv(p, {"line", "t", "re", "im", "abs"}, rows);
                res["csv"] = std::filesystem::path(p).filename().string();
            }
            return ok ? 0 : 2;
        }
        in["theta"] = c.theta;
        if (cmd == "radon") {
            in["zeta_count"] = c.zeta_count;
            ProjectionSplit sp = projection_split(cv, Angle(c.theta));
            auto rs = radon_projection(f, cv, Angle(c.theta), default_zeta_grid(sp, c.zeta_count));
            res = to_json(rs);
            cplx m = radon_mass(f, cv, Angle(c.theta));
            res["mass"] = {m.real(), m.imag()};
            if (std::string p = csv_path(c, "radon"); !p.empty()) {
                std::vector<std::vector<double>> rows;
                for (std::size_t i = 0; i < rs.zeta.size(); ++i) rows.push_back({rs.zeta[i], rs.values[i].real(), rs.values[i].imag()});
                write_csv(p, {"zeta", "re", "im"}, rows);
                res["csv"] = std::filesystem::path(p).filename().string();
            }
            return 0;
        }
        in["xi_range"] = c.xi_range;
        in["xi_count"] = c.xi_count;
        auto sc = fourier_slice_check(f, cv, Angle(c.theta), linspace(c.xi_range[0], c.xi_range[1], c.xi_count));
        res = to_json(sc);
        return 0;
    }
    throw Error(ErrorKind::InvalidSpec, "unknown command " + cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chord-map dynamics and uniqueness-pair diagnostics for planar curves"};
    app.require_subcommand(1);
    RunConfig c;

    auto curve_opt = [&](CLI::App* s, bool required = true) {
        auto* o = s->add_option("--curve", c.curve, "curve spec: JSON file or inline JSON");
        if (required) o->required();
    };
    auto two_angles = [&](CLI::App* s) {
        s->add_option("--theta1", c.theta1, "first line angle (radians)")->required();
        s->add_option("--theta2", c.theta2, "second line angle (radians)")->required();
    };
    auto common = [&](CLI::App* s) {
        s->add_option("--out", c.out, "write the JSON report here (CSV files go next to it)");
        s->add_option("--tol", c.tol, "tolerance (default from HUP_DEFAULT_TOL)");
    };

    std::map<std::string, CLI::App*> cmds;
    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* s = app.add_subcommand(name, help);
        common(s);
        cmds[name] = s;
        return s;
    };

    auto* split = add("split", "projection split I0 / I- / I+");
    curve_opt(split);
    split->add_option("--theta", c.theta, "line angle (radians)")->required();

    auto* one = add("hup-one-line", "is the projection onto one line injective");
    curve_opt(one);
    one->add_option("--theta", c.theta)->required();

    auto* orb = add("orbit", "iterate Phi = Phi2 o Phi1");
    curve_opt(orb);
    two_angles(orb);
    orb->add_option("--x0", c.x0);
    orb->add_option("--n", c.n);

    auto* rot = add("rotation", "rotation number estimate");
    curve_opt(rot);
    two_angles(rot);
    rot->add_option("--x0", c.x0);
    rot->add_option("--n", c.n);
    rot->add_option("--period-cap", c.period_cap);

    auto* per = add("periodic", "search for periodic orbits");
    curve_opt(per);
    two_angles(per);
    per->add_option("--max-period", c.period_cap);

    auto* wan = add("wandering", "wandering interval certificate");
    curve_opt(wan);
    two_angles(wan);
    wan->add_option("--interval", c.interval)->expected(2)->required();
    wan->add_option("--horizon", c.horizon);

    auto* att = add("attract", "attractive interval certificate");
    curve_opt(att);
    two_angles(att);
    att->add_option("--interval", c.interval)->expected(2)->required();
    att->add_option("--k", c.k);
    att->add_option("--n-limit", c.n_limit);

    auto* sig = add("sigma", "sigma sequence on a graph");
    curve_opt(sig);
    two_angles(sig);
    sig->add_option("--sigma0", c.sigma0);
    sig->add_option("--n", c.n);

    auto* cusp = add("cusp", "three-fold maps near a cusp");
    curve_opt(cusp);
    cusp->add_option("--theta", c.theta)->required();

    auto* ce = add("counterexample", "construct an annihilating density");
    curve_opt(ce, false);
    ce->add_option("--kind", c.kind, "circle-rational | hyperbola-perpendicular | generic-periodic");
    ce->add_option("--q", c.q);
    ce->add_option("--profile", c.profile, "sin | bump");
    ce->add_option("--theta1", c.theta1);
    ce->add_option("--theta2", c.theta2);
    ce->add_flag("--verify", c.verify, "check the Fourier transform on both lines");
    ce->add_option("--t-range", c.t_range)->expected(2);
    ce->add_option("--t-count", c.t_count);
    ce->add_option("--grid", c.grid, "density grid in the report");

    auto* ann = add("annihilate", "alternating-projection annihilator search");
    curve_opt(ann);
    two_angles(ann);
    ann->add_option("--grid", c.grid);
    ann->add_option("--iterations", c.iterations);
    ann->add_option("--seed", c.seed);

    auto* ver = add("verify", "check that a density's Fourier transform vanishes on lines");
    curve_opt(ver);
    ver->add_option("--density", c.density)->required();
    ver->add_option("--lines", c.lines, "line angles (radians)");
    ver->add_option("--theta1", c.theta1);
    ver->add_option("--theta2", c.theta2);
    ver->add_option("--t-range", c.t_range)->expected(2);
    ver->add_option("--t-count", c.t_count);

    auto* rad = add("radon", "Radon slice of a density");
    curve_opt(rad);
    rad->add_option("--density", c.density)->required();
    rad->add_option("--theta", c.theta)->required();
    rad->add_option("--zeta-count", c.zeta_count);

    auto* sl = add("slice-check", "Fourier-slice comparison");
    curve_opt(sl);
    sl->add_option("--density", c.density)->required();
    sl->add_option("--theta", c.theta)->required();
    sl->add_option("--xi-range", c.xi_range)->expected(2);
    sl->add_option("--xi-count", c.xi_count);

    auto* ell = add("ellipse-reduce", "reduce an ellipse pair to the circle");
    ell->add_option("--a", c.a)->required();
    ell->add_option("--b", c.b)->required();
    two_angles(ell);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::string cmd;
    for (const auto& [name, s] : cmds)
        if (s->parsed()) cmd = name;

    Report rep;
    rep.command = cmd;
    int status = 0;
    try {
        status = run(cmd, c, rep);
    } catch (const Error& e) {
        bool cert = is_certificate_failure(e.kind());
        rep.results = {{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}, {"detail", e.detail()}}}};
        status = cert ? 2 : 1;
        std::cerr << "hup " << cmd << ": " << e.what() << "\n";
        if (!cert) return status;
    } catch (const std::exception& e) {
        std::cerr << "hup " << cmd << ": " << e.what() << "\n";
        return 1;
    }
    rep.results["status"] = status == 0 ? "ok" : "failed";
    try {
        if (c.out.empty()) std::cout << rep.dump();
        else write_atomic(c.out, rep.dump());
    } catch (const std::exception& e) {
        std::cerr << "hup: " << e.what() << "\n";
        return 1;
    }
    return status;
}
