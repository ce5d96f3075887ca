#include <doctest.h>

#include "hup/dynamics.hpp"

#include <cmath>

using namespace hup;

namespace {
CircleMapLift circle_lift(double th1, double th2, const Curve& c = Curve::circle()) {
    return compose_and_lift(ChordMap(c, Angle(th1)), ChordMap(c, Angle(th2)));
}
} // namespace

TEST_CASE("circle composition is a rotation") {
    auto lift = circle_lift(0.0, 1.0);
    for (double s : {0.0, 0.2, 0.77}) {
        double d = lift(s) - s;
        CHECK(d == doctest::Approx(1.0 / kPi).epsilon(1e-14));
    }
    CHECK_THROWS_AS(circle_lift(0.3, 0.3), Error);
    CHECK_THROWS_AS(circle_lift(0.3, 0.3 + kPi), Error);
}

TEST_CASE("ellipse lift has degree one") {
    Curve e(EllipseSpec{2.0, 1.0});
    auto lift = circle_lift(0.0, 1.0, e);
    double prev = lift(-1e-3);
    for (int i = 0; i <= 1000; ++i) {
        double x = i / 1000.0;
        CHECK(std::abs(lift(x + 1) - lift(x) - 1) <= 1e-10);
        double v = lift(x);
        CHECK(v > prev);
        prev = v;
    }
    double fx = lift(0.0);
    CHECK(fx >= 0.0);
    CHECK(fx < 1.0);
}

TEST_CASE("rotation numbers on the circle") {
    auto r = rotation_number(circle_lift(0.0, 1.0), 0.1, 10000);
    CHECK(std::abs(r.value - 1.0 / kPi) < 1e-12);
    CHECK(r.a <= r.lift_value);
    CHECK(r.lift_value <= r.b);
    CHECK_FALSE(r.periodic_orbit_found);

    auto t = rotation_number(circle_lift(0.0, kPi / 3), 0.0, 10000);
    CHECK(std::abs(t.value - 1.0 / 3) < 1e-12);
    REQUIRE(t.rational_candidate);
    CHECK(t.rational_candidate->p == 1);
    CHECK(t.rational_candidate->q == 3);
    CHECK(t.periodic_orbit_found);
}

TEST_CASE("golden rotation has no short periodic orbit") {
    double g = (std::sqrt(5.0) - 1) / 2;
    auto lift = circle_lift(0.0, g * kPi);
    CHECK_FALSE(detect_periodic_orbit(lift, 64, 1e-10).has_value());
}

TEST_CASE("continued fractions") {
    auto c = convergents(1.0 / kPi, 1000);
    REQUIRE(c.size() >= 5);
    CHECK(c[1].p == 1);
    CHECK(c[1].q == 3);
    CHECK(c[2].p == 7);
    CHECK(c[2].q == 22);
    CHECK(c[3].p == 106);
    CHECK(c[3].q == 333);
    CHECK(c[4].p == 113);
    CHECK(c[4].q == 355);
}

TEST_CASE("perturbed circle has rotation 1/2 and a period-2 orbit") {
    Curve pc(PerturbedCircleSpec{});
    auto lift = circle_lift(0.0, kPi / 2, pc);
    auto r = rotation_number(lift, 0.1, 2000);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(r.periodic_orbit_found);
    REQUIRE(r.orbit);
    CHECK(r.orbit->period == 2);
    bool eighth = false;
    for (double x : r.orbit->points) {
        double k = x * 8;
        if (std::abs(k - std::round(k)) < 1e-7) eighth = true;
    }
    CHECK(eighth);
}

TEST_CASE("perturbed circle attractive interval") {
    Curve pc(PerturbedCircleSpec{});
    auto lift = circle_lift(0.0, kPi / 2, pc);
    auto cert = certify_attractive(as_interval_map(lift), 0.26, 0.49, 2);
    REQUIRE(cert.limit);
    CHECK(*cert.limit == doctest::Approx(0.375).epsilon(1e-7));
    CHECK(cert.lower_increasing);
    CHECK(cert.upper_decreasing);
    CHECK_THROWS_AS(certify_wandering(as_interval_map(lift), 0.26, 0.49, 100), Error);
}

TEST_CASE("irrational circle rotation is never contained") {
    auto lift = circle_lift(0.0, 1.0);
    for (int k = 1; k <= 64; ++k) CHECK_THROWS_AS(certify_attractive(as_interval_map(lift), 0.1, 0.3, k), Error);
}

TEST_CASE("half rotation overlaps quickly") {
    auto lift = circle_lift(0.0, kPi / 2);
    try {
        certify_wandering(as_interval_map(lift), 0.1, 0.2, 100);
        FAIL("expected overlap");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Overlap);
        CHECK(e.detail() <= 2);
    }
}

TEST_CASE("parabola sigma sequence") {
    Curve p(GraphSpec{});
    double th2 = 1.9;
    double s2 = -1.0 / std::tan(th2) / 2;
    auto seq = sigma_sequence(p, Angle(-kPi / 2), Angle(th2), std::nullopt, 10);
    REQUIRE(seq.sigma.size() == 11);
    for (int k = 1; k <= 10; ++k) CHECK(seq.sigma[k] == doctest::Approx(2 * k * s2).epsilon(1e-12));
    CHECK(seq.direction == 1);
    CHECK_THROWS_AS(sigma_sequence(p, Angle(0.0), Angle(th2), std::nullopt, 5), Error);
}

TEST_CASE("parabola wandering interval") {
    Curve p(GraphSpec{});
    ChordMap m1(p, Angle(-kPi / 2)), m2(p, Angle(1.9));
    auto seq = sigma_sequence(p, Angle(-kPi / 2), Angle(1.9), std::nullopt, 2);
    auto cert = certify_wandering(as_interval_map(m1, m2), seq.sigma[1], seq.sigma[2]);
    CHECK(cert.infinite_horizon);
    CHECK(cert.reason == "escape");
}

TEST_CASE("orientation reversing circle maps") {
    // s -> -s has fixed points 0 and 1/2 and everything else has period 2
    CircleFunction refl = [](double s) { return wrap(-s, 1.0); };
    auto o = detect_periodic_orbit(refl, 8, 1e-12, {0.0, 0.5});
    REQUIRE(o);
    CHECK(o->period == 2);
    CHECK_THROWS_AS(CircleMapLift{refl}, Error);
}
