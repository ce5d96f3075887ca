#include <doctest.h>

#include "hup/curve.hpp"

#include <cmath>

using namespace hup;

TEST_CASE("circle evaluation") {
    Curve c = Curve::circle();
    Point2 p = c.eval(0.0);
    CHECK(p.x() == doctest::Approx(1.0));
    CHECK(p.y() == doctest::Approx(0.0));
    Point2 q = c.eval(0.25);
    CHECK(q.x() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(q.y() == doctest::Approx(1.0));
    CHECK(c.closed());
    CHECK(c.corners().empty());
}

TEST_CASE("standard hyperbola vertex") {
    Curve h(HyperbolaSpec{});
    Point2 p = h.eval(0.25);
    CHECK(std::abs(p.x()) < 1e-14);
    CHECK(p.y() == doctest::Approx(1.0));
    CHECK_FALSE(h.closed());
    CHECK(h.domain().intervals.size() == 2);
    CHECK_THROWS_AS(h.eval(0.0), Error);
}

TEST_CASE("tube joints are continuous") {
    Curve t(TubeSpec{});
    double l = t.tube_length();
    CHECK(l > 0);
    for (double j : {0.25, 0.5, 0.75}) {
        Point2 a = t.eval_side(j, 0, -1), b = t.eval_side(j, 0, +1);
        CHECK((a - b).norm() < 1e-12);
    }
    Point2 a = t.eval_side(0.0, 0, -1), b = t.eval_side(0.0, 0, +1);
    CHECK((a - b).norm() < 1e-12);
}

TEST_CASE("power graph cusp") {
    Curve g(GraphSpec{PowerPsi{0.5, false}});
    CHECK(g.corners().size() == 1);
    CHECK_THROWS_AS(g.eval(0.0, 1), Error);
    Point2 p = g.eval(4.0);
    CHECK(p.y() == doctest::Approx(2.0));
}

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(Curve(PolygonSpec{{Point2(0, 0), Point2(1, 0), Point2(2, 0)}}), Error);
    Curve sq = regular_polygon(4);
    CHECK(sq.corners().size() == 4);
    CHECK(sq.piecewise_linear());
}

TEST_CASE("perturbed circle stays convex") {
    Curve c(PerturbedCircleSpec{});
    auto rep = c.convexity();
    REQUIRE(rep);
    CHECK(rep->standard_min > 0);
    CHECK(rep->chi_max < 0.5);
}

TEST_CASE("corner cones of a diamond") {
    Curve d(PolygonSpec{{Point2(1, 0), Point2(0, 1), Point2(-1, 0), Point2(0, -1)}});
    auto cones = corner_cones(d);
    REQUIRE(cones.size() == 4);
    for (const auto& c : cones) {
        CHECK(c.cone_plus.width > 0);
        CHECK(c.cone_minus.width > 0);
        CHECK(c.cone_plus.width + c.cone_minus.width < kPi);
    }
}
