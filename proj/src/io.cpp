#include "hup/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace hup {

namespace {

Point2 point(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::InvalidSpec, "point must be [x, y]");
    return Point2(j[0].get<double>(), j[1].get<double>());
}

Json point(const Point2& p) { return Json::array({p.x(), p.y()}); }

double num(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw Error(ErrorKind::InvalidSpec, std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

Psi psi_from_json(const Json& j) {
    std::string kind = j.value("kind", "power");
    if (kind == "power") return PowerPsi{num(j, "alpha", 2.0), j.value("signed", false)};
    if (kind == "polynomial") return PolynomialPsi{j.at("coeffs").get<std::vector<double>>()};
    if (kind == "tabulated")
        return TabulatedPsi{j.at("t").get<std::vector<double>>(), j.at("y").get<std::vector<double>>()};
    throw Error(ErrorKind::InvalidSpec, "unknown psi kind '" + kind + "'");
}

Json psi_to_json(const Psi& p) {
    if (auto a = std::get_if<PowerPsi>(&p)) return {{"kind", "power"}, {"alpha", a->alpha}, {"signed", a->is_signed}};
    if (auto b = std::get_if<PolynomialPsi>(&p)) return {{"kind", "polynomial"}, {"coeffs", b->coeffs}};
    const auto& t = std::get<TabulatedPsi>(p);
    return {{"kind", "tabulated"}, {"t", t.t}, {"y", t.y}};
}

} // namespace

Curve curve_from_json(const Json& j) {
    try {
        if (!j.is_object()) throw Error(ErrorKind::InvalidSpec, "curve spec must be a JSON object");
        std::string type = j.value("type", "");
        if (type == "circle") {
            double r = num(j, "radius", 1.0);
            return Curve(EllipseSpec{r, r, j.contains("center") ? point(j["center"]) : Point2::Zero(), 0.0});
        }
        if (type == "ellipse")
            return Curve(EllipseSpec{num(j, "a", 1.0), num(j, "b", 1.0),
                                     j.contains("center") ? point(j["center"]) : Point2::Zero(), num(j, "rotation", 0.0)});
        if (type == "graph") {
            GraphSpec g;
            if (j.contains("psi")) g.psi = psi_from_json(j["psi"]);
            if (j.contains("window")) {
                auto w = j["window"].get<std::vector<double>>();
                if (w.size() != 2) throw Error(ErrorKind::InvalidSpec, "window must be [lo, hi]");
                g.lo = w[0];
                g.hi = w[1];
            }
            return Curve(g);
        }
        if (type == "hyperbola_std" || type == "hyperbola") return Curve(HyperbolaSpec{num(j, "window", 50.0)});
        if (type == "polygon") {
            PolygonSpec p;
            for (const auto& v : j.at("vertices")) p.vertices.push_back(point(v));
            return Curve(p);
        }
        if (type == "regular_polygon") return regular_polygon(j.at("n").get<int>(), num(j, "radius", 1.0));
        if (type == "tube") return Curve(TubeSpec{num(j, "theta1", -0.4), num(j, "theta2", 0.6)});
        if (type == "perturbed_circle")
            return Curve(PerturbedCircleSpec{num(j, "epsilon", 0.02), num(j, "sharpness", 1.0)});
        throw Error(ErrorKind::InvalidSpec, "unknown curve type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string("malformed curve spec: ") + e.what());
    }
}

Json curve_to_json(const Curve& c) {
    const CurveSpec& s = c.spec();
    if (auto e = std::get_if<EllipseSpec>(&s))
        return {{"type", "ellipse"}, {"a", e->a}, {"b", e->b}, {"center", point(e->center)}, {"rotation", e->rotation}};
    if (auto g = std::get_if<GraphSpec>(&s))
        return {{"type", "graph"}, {"psi", psi_to_json(g->psi)}, {"window", {g->lo, g->hi}}};
    if (auto h = std::get_if<HyperbolaSpec>(&s)) return {{"type", "hyperbola_std"}, {"window", h->window}};
    if (auto p = std::get_if<PolygonSpec>(&s)) {
        Json v = Json::array();
        for (const auto& q : p->vertices) v.push_back(point(q));
        return {{"type", "polygon"}, {"vertices", v}};
    }
    if (auto t = std::get_if<TubeSpec>(&s)) return {{"type", "tube"}, {"theta1", t->theta1}, {"theta2", t->theta2}};
    const auto& pc = std::get<PerturbedCircleSpec>(s);
    return {{"type", "perturbed_circle"}, {"epsilon", pc.epsilon}, {"sharpness", pc.sharpness}};
}

namespace {

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidSpec, "cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, "'" + path + "' is not valid JSON: " + e.what());
    }
}

} // namespace

Curve load_curve(const std::string& arg) {
    std::size_t k = arg.find_first_not_of(" \t\n");
    if (k != std::string::npos && arg[k] == '{') {
        try {
            return curve_from_json(Json::parse(arg));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::InvalidSpec, std::string("inline curve is not valid JSON: ") + e.what());
        }
    }
    return curve_from_json(read_json_file(arg));
}

Json interval_list(const std::vector<Interval>& ivs) {
    Json a = Json::array();
    for (const auto& iv : ivs) a.push_back({iv.lo, iv.hi});
    return a;
}

Json density_to_json(const Density& f, const Curve& curve, int grid) {
    Density g = f.is_grid() ? f : (f.is_zero() ? Density::from_grid(domain_grid(curve, grid),
                                                                      Eigen::VectorXcd::Zero(domain_grid(curve, grid).size()),
                                                                      curve.domain().intervals, curve.closed())
                                               : f.sampled(curve, grid));
    std::vector<double> x(g.nodes().data(), g.nodes().data() + g.nodes().size()), re, im;
    for (Eigen::Index i = 0; i < g.values().size(); ++i) {
        re.push_back(g.values()[i].real());
        im.push_back(g.values()[i].imag());
    }
    Json dom = {{"intervals", interval_list(g.support())}};
    if (g.period()) dom["period"] = *g.period();
    else dom["period"] = nullptr;
    return {{"grid", x}, {"values_re", re}, {"values_im", im}, {"domain", dom}};
}

Density density_from_json(const Json& j) {
    try {
        auto x = j.at("grid").get<std::vector<double>>();
        auto re = j.at("values_re").get<std::vector<double>>();
        std::vector<double> im = j.contains("values_im") ? j["values_im"].get<std::vector<double>>()
                                                          : std::vector<double>(re.size(), 0.0);
        if (x.size() != re.size() || im.size() != re.size())
            throw Error(ErrorKind::InvalidSpec, "density grid and values differ in length");
        std::vector<Interval> sup;
        for (const auto& iv : j.at("domain").at("intervals")) sup.push_back(Interval{iv.at(0).get<double>(), iv.at(1).get<double>()});
        bool periodic = j["domain"].contains("period") && !j["domain"]["period"].is_null();
        Eigen::VectorXd nodes = Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
        Eigen::VectorXcd vals(static_cast<Eigen::Index>(x.size()));
        for (std::size_t i = 0; i < x.size(); ++i) vals[static_cast<Eigen::Index>(i)] = cplx(re[i], im[i]);
        return Density::from_grid(nodes, vals, sup, periodic);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string("malformed density: ") + e.what());
    }
}

Density load_density(const std::string& path) {
    Json j = read_json_file(path);
    if (j.contains("results") && j["results"].contains("density")) return density_from_json(j["results"]["density"]);
    return density_from_json(j);
}

Json to_json(const ProjectionSplit& sp) {
    Json pieces = Json::array();
    for (const auto& p : sp.pieces)
        pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"sign", p.sign}, {"value_range", {p.vlo, p.vhi}}});
    return {{"theta", sp.theta.radians()},
            {"critical_set", sp.critical_set},
            {"I0", interval_list(sp.I0)},
            {"I_minus", interval_list(sp.Iminus)},
            {"I_plus", interval_list(sp.Iplus)},
            {"multi_fold_set", interval_list(sp.multi)},
            {"fold_count", sp.fold_count},
            {"I0_measure", sp.I0_measure()},
            {"pieces", pieces}};
}

Json to_json(const PeriodicOrbit& o) {
    return {{"period", o.period}, {"rotation", o.rotation}, {"points", o.points}, {"everywhere", o.everywhere}};
}

Json to_json(const RotationEstimate& r) {
    Json conv = Json::array();
    for (const auto& c : r.convergents) conv.push_back({c.p, c.q});
    Json j = {{"value", r.value},
              {"lift_value", r.lift_value},
              {"n", r.n},
              {"bounds", {r.a, r.b}},
              {"convergents", conv},
              {"periodic_orbit_found", r.periodic_orbit_found},
              {"period_cap", r.period_cap}};
    j["rational_candidate"] = r.rational_candidate ? Json({r.rational_candidate->p, r.rational_candidate->q}) : Json(nullptr);
    j["periodic_orbit"] = r.orbit ? to_json(*r.orbit) : Json(nullptr);
    if (!r.periodic_orbit_found) j["note"] = "no periodic orbit up to period " + std::to_string(r.period_cap);
    return j;
}

Json to_json(const IntervalCertificate& c, bool with_orbit) {
    Json j = {{"kind", c.kind},
              {"interval", {c.lo, c.hi}},
              {"horizon", c.horizon},
              {"period", c.period},
              {"infinite_horizon", c.infinite_horizon},
              {"reason", c.reason},
              {"monotone", c.monotone},
              {"lower_increasing", c.lower_increasing},
              {"upper_decreasing", c.upper_decreasing},
              {"final_width", c.final_width}};
    j["limit"] = c.limit ? Json(*c.limit) : Json(nullptr);
    if (with_orbit) {
        Json o = Json::array();
        for (const auto& p : c.orbit) o.push_back({p.first, p.second});
        j["orbit"] = o;
    }
    return j;
}

Json to_json(const SigmaSequence& s) {
    return {{"theta1", s.theta1.radians()}, {"theta2", s.theta2.radians()}, {"sigma", s.sigma},
            {"direction", s.direction},     {"left_window", s.left_window},   {"tangency1", s.tangency1},
            {"tangency2", s.tangency2}};
}

Json to_json(const CuspMaps& c) {
    return {{"theta", c.theta.radians()}, {"cusp", c.cusp}, {"a", c.a}, {"b", c.b}, {"c", c.c}};
}

Json to_json(const AnnihilationReport& r) {
    Json lines = Json::array();
    for (const auto& l : r.lines)
        lines.push_back({{"theta", l.theta.radians()},
                         {"max_modulus", l.max_modulus},
                         {"max_quadrature_error", l.max_error},
                         {"converged", l.converged}});
    return {{"t_range", {r.t_lo, r.t_hi}}, {"t_count", r.t_count}, {"lines", lines}};
}

Json to_json(const AngleProbe& p) {
    return {{"phi", p.phi},
            {"strictly_monotone", p.strictly_monotone},
            {"monotone_from", p.monotone_from},
            {"two_periodic", p.two_periodic},
            {"period2_deviation", p.period2_deviation}};
}

Json to_json(const EllipseReduction& e) {
    return {{"phi1", e.phi1},
            {"phi2", e.phi2},
            {"predicate", e.predicate},
            {"predicate_swapped_axis", e.predicate_swapped},
            {"closed_formula_difference", e.closed_formula},
            {"closed_formula_discrepancy", e.discrepancy}};
}

Json to_json(const SliceCheck& s) {
    return {{"theta", s.theta.radians()}, {"xi_count", s.xi.size()}, {"max_discrepancy", s.max_discrepancy}};
}

Json to_json(const RadonSlice& s) {
    return {{"theta", s.theta.radians()}, {"points", s.zeta.size()}, {"skipped", s.skipped}};
}

Json Report::to_json() const {
    return {{"command", command}, {"version", version}, {"inputs", inputs}, {"results", results}};
}

Report Report::from_json(const Json& j) {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.inputs = j.at("inputs");
    r.results = j.at("results");
    return r;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::InvalidSpec, "cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw Error(ErrorKind::InvalidSpec, "write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
    write_atomic(path, os.str());
}

} // namespace hup
