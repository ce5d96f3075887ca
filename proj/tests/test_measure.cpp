#include <doctest.h>

#include "hup/measure.hpp"

#include <cmath>

using namespace hup;

namespace {
Density circle_fn(Density::Fn f) { return Density::from_function(f, {Interval{0.0, 1.0}}, {}, 1.0); }
Density sin4() {
    return circle_fn([](double s) -> cplx { return std::sin(2 * kTwoPi * s); });
}
} // namespace

TEST_CASE("Fourier transform basics on the circle") {
    Curve c = Curve::circle();
    Density one = circle_fn([](double) -> cplx { return 1.0; });
    CHECK(std::abs(fourier_transform(one, c, Point2(0, 0)).value - 1.0) < 1e-13);
    CHECK(std::abs(fourier_transform(sin4(), c, Point2(0, 0)).value) < 1e-13);
    for (double t : {-50.0, -7.3, 0.5, 13.0, 50.0}) {
        auto q = fourier_transform(sin4(), c, Point2(t, 0));
        CHECK(std::abs(q.value) < 1e-9);
        CHECK(q.converged);
    }
    // f = 1: J0-type integral, int exp(-i t cos 2 pi s) ds = J0(t)
    CHECK(std::abs(fourier_transform(one, c, Point2(2.0, 0)).value.real() - std::cyl_bessel_j(0.0, 2.0)) < 1e-12);
}

TEST_CASE("Fourier transform is linear") {
    Curve c = Curve::circle();
    Density f = sin4();
    Density g = circle_fn([](double s) -> cplx { return std::exp(std::cos(kTwoPi * s)); });
    Density h = Density::combine(2.0, f, cplx(0, -3.0), g);
    Point2 xi(3.0, -4.0);
    cplx lhs = fourier_transform(h, c, xi).value;
    cplx rhs = 2.0 * fourier_transform(f, c, xi).value + cplx(0, -3.0) * fourier_transform(g, c, xi).value;
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("level-set residual") {
    Curve c = Curve::circle();
    Density odd = circle_fn([](double s) -> cplx { return std::sin(kTwoPi * s) + 0.3 * std::sin(3 * kTwoPi * s); });
    CHECK(eqfund_residual(odd, c, Angle(0.0)) <= 1e-9);
    CHECK(eqfund_residual(Density(), c, Angle(0.0)) == 0.0);
    Density one = circle_fn([](double) -> cplx { return 1.0; });
    std::vector<double> z{0.0, 0.5};
    double r = eqfund_residual(one, c, Angle(0.0), z);
    // zeta = 0.5: two points with |pi'| = 2 pi sin(pi/3)
    CHECK(r == doctest::Approx(2.0 / (kTwoPi * std::sin(kPi / 3))));
}

TEST_CASE("annihilation on the circle") {
    Curve c = Curve::circle();
    auto rep = check_annihilation(sin4(), c, {Angle(0.0), Angle(kPi / 2), Angle(kPi / 4)});
    CHECK(rep.lines[0].max_modulus <= 1e-8);
    CHECK(rep.lines[1].max_modulus <= 1e-8);
    CHECK(rep.lines[2].max_modulus > 1e-3);
    auto z = check_annihilation(Density(), c, {Angle(0.0)});
    CHECK(z.lines[0].max_modulus == 0.0);
}

TEST_CASE("propagation recovers sin 4 pi s") {
    Curve c = Curve::circle();
    ChordMap m1(c, Angle(0.0)), m2(c, Angle(kPi / 2));
    Density seed = Density::from_function([](double s) -> cplx { return std::sin(2 * kTwoPi * s); },
                                          {Interval{0.0, 0.25}}, {}, 1.0);
    auto pr = propagate_density(seed, {Interval{0.0, 0.25}}, {m1, m2}, c);
    CHECK(pr.warnings.empty());
    for (double s : {0.1, 0.3, 0.45, 0.6, 0.8, 0.95}) CHECK(pr.density(s).real() == doctest::Approx(std::sin(4 * kPi * s)));
    CHECK(eqfund_residual(pr.density, c, Angle(0.0)) < 1e-9);
    CHECK(eqfund_residual(pr.density, c, Angle(kPi / 2)) < 1e-9);
    auto z = propagate_density(Density(), {Interval{0.0, 0.25}}, {m1, m2}, c);
    CHECK(z.density(0.6) == 0.0);
    CHECK_THROWS_AS(propagate_density(seed, {Interval{0.0, 0.1}}, {m1, m2}, c), Error);
}

TEST_CASE("circle counterexamples") {
    CounterexampleSpec s;
    s.q = 2;
    auto ce = construct_counterexample(s);
    CHECK(ce.density(0.1).real() == doctest::Approx(std::sin(0.4 * kPi)));
    s.q = 3;
    s.profile = "bump";
    auto c3 = construct_counterexample(s);
    CHECK(c3.l1 == doctest::Approx(1.0));
    auto rep = check_annihilation(c3.density, c3.curve, {Angle(0.0), Angle(kPi / 3)}, -50, 50, 101);
    CHECK(rep.lines[0].max_modulus <= 1e-8);
    CHECK(rep.lines[1].max_modulus <= 1e-8);
    CHECK(projection_pass_change(c3.density, c3.curve, c3.theta1, c3.theta2) <= 1e-8);
}

TEST_CASE("hyperbola conjugate counterexample") {
    CounterexampleSpec s;
    s.kind = "hyperbola_perpendicular";
    auto ce = construct_counterexample(s);
    CHECK(ce.theta2.radians() == doctest::Approx(kPi / 8));
    CHECK(ce.l1 >= 0.1);
    auto rep = check_annihilation(ce.density, ce.curve, {ce.theta1, ce.theta2}, -50, 50, 101);
    CHECK(rep.lines[0].max_modulus <= 1e-6);
    CHECK(rep.lines[1].max_modulus <= 1e-6);
}

TEST_CASE("generic periodic counterexample") {
    CounterexampleSpec s;
    s.kind = "generic_periodic";
    s.curve = Curve::circle();
    s.theta1 = 0.0;
    s.theta2 = kPi / 3;
    auto ce = construct_counterexample(s);
    CHECK(ce.l1 == doctest::Approx(1.0));
    CHECK(ce.residual1 < 1e-8);
    s.curve = Curve(PerturbedCircleSpec{});
    s.theta2 = kPi / 2;
    CHECK_THROWS_AS(construct_counterexample(s), Error);
}

TEST_CASE("mass invariance") {
    Curve c = Curve::circle();
    Density odd = circle_fn([](double s) -> cplx { return std::sin(kTwoPi * s) + 0.3 * std::sin(3 * kTwoPi * s); });
    ChordMap m(c, Angle(0.0));
    auto a = mass_invariance_check(odd, m, Interval{0.05, 0.2});
    CHECK(std::abs(a.image - a.original) < 1e-10);
    auto b = mass_invariance_check(odd, m, Interval{0.05, 0.2}, true);
    CHECK(std::abs(b.image - b.original) < 1e-10);
    auto z = mass_invariance_check(Density(), m, Interval{0.05, 0.2});
    CHECK(z.image == 0.0);
    Density one = circle_fn([](double) -> cplx { return 1.0; });
    CHECK_THROWS_AS(mass_invariance_check(one, m, Interval{0.05, 0.2}), Error);
}

TEST_CASE("grid densities interpolate linearly") {
    Curve c = Curve::circle();
    Density g = sin4().sampled(c, 8192);
    CHECK(g.is_grid());
    CHECK(std::abs(g(0.123).real() - std::sin(4 * kPi * 0.123)) < 1e-6);
    CHECK(std::abs(l1_norm(g, c) - 2.0 / kPi) < 1e-6);
}
