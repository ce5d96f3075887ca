#include "hup/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace hup;

TEST_CASE("curve specs survive a json round trip") {
    std::vector<std::string> specs = {
        R"({"type":"circle","radius":2.0,"center":[1,-1]})",
        R"({"type":"ellipse","a":2,"b":1,"rotation":0.3})",
        R"({"type":"graph","psi":{"kind":"power","alpha":3,"signed":true},"window":[-10,10]})",
        R"({"type":"graph","psi":{"kind":"polynomial","coeffs":[0,0,1,0,0.5]}})",
        R"({"type":"hyperbola_std","window":20})",
        R"({"type":"polygon","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]]})",
        R"({"type":"regular_polygon","n":5,"radius":1})",
        R"({"type":"tube","theta1":-0.4,"theta2":0.6})",
        R"({"type":"perturbed_circle","epsilon":0.02})",
    };
    for (const auto& s : specs) {
        CAPTURE(s);
        Curve a = load_curve(s);
        Json j = curve_to_json(a);
        Curve b = curve_from_json(j);
        CHECK(curve_to_json(b) == j);
        for (double t : {0.013, 0.37, 0.81}) {
            const Interval& d = a.domain().intervals.front();
            double u = d.lo + t * d.length();
            CHECK((a.eval(u) - b.eval(u)).norm() < 1e-14);
        }
    }
    CHECK_THROWS_AS(load_curve(R"({"type":"spiral"})"), Error);
    CHECK_THROWS_AS(load_curve(R"({"type":"ellipse","a":"x"})"), Error);
}

TEST_CASE("density json keeps grid values") {
    Curve c(EllipseSpec{});
    Density f = Density::from_function([](double s) { return cplx(std::sin(2 * kPi * s), 0.5); }, {Interval{0.0, 1.0}}, {}, 1.0);
    Json j = density_to_json(f, c, 512);
    Density g = density_from_json(j);
    for (double s : {0.0, 0.1, 0.3333, 0.77}) CHECK(std::abs(f(s) - g(s)) < 1e-3);
    CHECK(density_to_json(g, c, 512) == j);
}

TEST_CASE("reports round trip and write atomically") {
    Report r;
    r.command = "rotation";
    r.inputs = {{"theta1", 0.0}, {"theta2", 1.0}};
    r.results = {{"value", 1.0 / 3.0}, {"bounds", {0.1, 0.7}}};
    Report back = Report::from_json(Json::parse(r.dump()));
    CHECK(back.to_json() == r.to_json());
    CHECK(back.version == kVersion);

    auto dir = std::filesystem::temp_directory_path() / "hup_io_test";
    std::filesystem::remove_all(dir);
    auto path = (dir / "sub" / "r.json").string();
    write_atomic(path, r.dump());
    std::ifstream in(path);
    CHECK(Report::from_json(Json::parse(in)).to_json() == r.to_json());
    std::filesystem::remove_all(dir);
}
