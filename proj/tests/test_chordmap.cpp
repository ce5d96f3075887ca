#include <doctest.h>

#include "hup/chordmap.hpp"

#include <cmath>

using namespace hup;

TEST_CASE("circle chord map is a reflection") {
    Curve c = Curve::circle();
    ChordMap m(c, Angle(0.0));
    CHECK(m.eval(0.3) == doctest::Approx(0.7));
    CHECK(m.derivative(0.3) == doctest::Approx(-1.0));
    ChordMap n(c, Angle(0.0), ChordMapOptions{true});
    CHECK_FALSE(n.closed_form());
    CHECK(n.eval(0.3) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(n.eval(0.1) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("circle split") {
    Curve c = Curve::circle();
    auto sp = projection_split(c, Angle(0.0));
    REQUIRE(sp.critical_set.size() == 2);
    CHECK(sp.critical_set[0] == doctest::Approx(0.0));
    CHECK(sp.critical_set[1] == doctest::Approx(0.5));
    CHECK(sp.fold_count == 2);
    CHECK(sp.I0_measure() == doctest::Approx(0.0));
    auto roots = level_set_solve(c, Angle(0.0), 0.0);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(0.25));
    CHECK(roots[1] == doctest::Approx(0.75));
}

TEST_CASE("rotated ellipse closed form agrees with the numeric map") {
    Curve e(EllipseSpec{2.0, 0.7, Point2(0.3, -1.0), 0.4});
    for (double th : {0.2, 1.1, 2.5}) {
        ChordMap a(e, Angle(th));
        ChordMap b(e, Angle(th), ChordMapOptions{true});
        REQUIRE(a.closed_form());
        for (double s : {0.05, 0.37, 0.61, 0.93}) {
            double x = a.eval(s), y = b.eval(s);
            double d = std::abs(x - y);
            CHECK(std::min(d, 1 - d) < 1e-10);
        }
    }
}

TEST_CASE("square root cusp three-fold regime") {
    Curve g(GraphSpec{PowerPsi{0.5, false}});
    auto cm = cusp_maps(g, Angle(-kPi / 4));
    CHECK(cm.cusp == doctest::Approx(0.0));
    CHECK(cm.b == doctest::Approx(0.25));
    CHECK(cm.a == doctest::Approx(1.0));
    double c = -std::pow((std::sqrt(2.0) - 1) / 2, 2);
    CHECK(cm.c == doctest::Approx(c));
    ChordMap m(g, Angle(-kPi / 4));
    CHECK_THROWS_AS(m.eval(-0.1), Error);
}

TEST_CASE("parabola has nonempty I0 and one tangency") {
    Curve p(GraphSpec{});
    auto sp = projection_split(p, Angle(1.9));
    CHECK(sp.critical_set.size() == 1);
    CHECK(sp.I0_measure() > 0);
    ChordMap m(p, Angle(1.9));
    double s0 = sp.critical_set[0];
    CHECK(m.eval(s0) == doctest::Approx(s0));
    double s = s0 + 0.3;
    CHECK(m.eval(m.eval(s)) == doctest::Approx(s));
}

TEST_CASE("hyperbola single line injectivity") {
    Curve h(HyperbolaSpec{});
    CHECK(single_line_hup_check(h, Angle(kPi / 4)));
    CHECK_FALSE(single_line_hup_check(Curve::circle(), Angle(0.3)));
}

TEST_CASE("polygon chord map is exact on edges") {
    Curve d(PolygonSpec{{Point2(1, 0), Point2(0, 1), Point2(-1, 0), Point2(0, -1)}});
    ChordMap m(d, Angle(0.3));
    for (double s : {0.05, 0.3, 0.55, 0.8}) {
        double t = m.eval(s);
        CHECK(projection(d, Angle(0.3), t) == doctest::Approx(projection(d, Angle(0.3), s)).epsilon(1e-14));
        CHECK(m.eval(t) == doctest::Approx(s).epsilon(1e-13));
    }
    CHECK_THROWS_AS(projection_split(d, Angle(kPi / 4)), Error);
}
