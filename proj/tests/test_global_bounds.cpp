#include <doctest.h>

#include <cmath>

#include "spinj/errors.hpp"
#include "spinj/global_bounds.hpp"

using namespace spinj;

namespace {

// Direct Clebsch-Gordan evaluation of the coupling sides for a diagonal probe:
// <up, m | P_+ | up, m> = (j+m+1)/(2j+1).
BfySides oracle_sides(const WeightDistribution& w) {
    const double j = w.sys.j();
    double lhs = 0.0, rhs = 0.0;
    for (Eigen::Index k = 0; k < w.sys.dim(); ++k) {
        const double m = w.sys.m_of(k);
        lhs += w.weights(k) * (j + m + 1) / (2 * j + 1) / (2 * j + 2);
        rhs += w.weights(k) * (j - m) / (2 * j + 1) / (2 * j);
    }
    return {lhs, rhs};
}

}  // namespace

TEST_CASE("coupling sides match the direct Clebsch-Gordan sum") {
    for (int n : {1, 2, 7, 30}) {
        for (const auto& w : {binomial_weights(SpinSystem(n), 0.4), geometric_weights(SpinSystem(n), 2.5),
                              delta_weights(SpinSystem(n), SpinSystem(n).m_of(0))}) {
            const auto s = bfy_sides(diagonal_state(w));
            const auto o = oracle_sides(w);
            CHECK(s.lhs == doctest::Approx(o.lhs).epsilon(1e-12));
            CHECK(s.rhs == doctest::Approx(o.rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("pure top state n = 1 gives R = 2/3") {
    const DensityState rho = diagonal_state(delta_weights(SpinSystem(1), 0.5));
    CHECK(bfy_holds(rho));
    CHECK(optimal_r(rho) == doctest::Approx(2.0 / 3.0));
    CHECK(delta_r_closed(1, 0.5) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("binomial closed form (np+1)/(n+2)") {
    for (int n = 2; n <= 40; ++n) {
        for (double p : {0.6, 0.75, 0.9}) {
            const double r = optimal_r(diagonal_state(binomial_weights(SpinSystem(n), p)));
            CHECK(r == doctest::Approx((n * p + 1) / (n + 2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("binomial with p < 1/2 fails the coupling condition") {
    const DensityState rho = diagonal_state(binomial_weights(SpinSystem(10), 0.3));
    CHECK_FALSE(bfy_holds(rho));
    try {
        optimal_r(rho);
        FAIL("expected BFY_FAILS");
    } catch (const ComputationError& e) {
        CHECK(e.reason() == "BFY_FAILS");
    }
    // p = 1/2 ties: sides equal, condition holds.
    CHECK(bfy_holds(diagonal_state(binomial_weights(SpinSystem(10), 0.5))));
}

TEST_CASE("geometric closed form and its expansion") {
    for (int n : {1, 5, 50}) {
        for (double r : {1.2, 2.0, 5.0}) {
            const double direct = optimal_r(diagonal_state(geometric_weights(SpinSystem(n), r)));
            CHECK(geometric_r_closed(n, r) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
    const double exact = eta_from_r(geometric_r_closed(200, 2.0));
    CHECK(exact == doctest::Approx(0.039604).epsilon(1e-4));
    CHECK(geometric_eta_expansion(200, 2.0) == doctest::Approx(0.0396).epsilon(1e-12));
    CHECK(std::abs(exact - geometric_eta_expansion(200, 2.0)) < 1e-5);
    CHECK_THROWS(geometric_r_closed(10, 0.5));
}

TEST_CASE("delta closed form and domain") {
    CHECK(delta_r_closed(100, 0.0) == doctest::Approx(51.0 / 102.0));
    CHECK_THROWS_AS(delta_r_closed(10, 6.0), DomainError);
    try {
        delta_r_closed(10, -1.0);
        FAIL("expected BFY_FAILS");
    } catch (const ComputationError& e) {
        CHECK(e.reason() == "BFY_FAILS");
    }
}

TEST_CASE("global report carries closed forms and asymptotics") {
    const auto g = global_report(binomial_weights(SpinSystem(400), 0.75));
    REQUIRE(g.r_max);
    REQUIRE(g.closed_form_r);
    CHECK(*g.r_max == doctest::Approx(*g.closed_form_r).epsilon(1e-10));
    REQUIRE(g.asymptotic_eta);
    CHECK(*g.asymptotic_eta == doctest::Approx(1.0));
    CHECK(*g.eta == doctest::Approx(1.0).epsilon(0.01));

    const auto half = global_report(delta_weights(SpinSystem(200), 0.0));
    CHECK(*half.eta >= 1.9);
    CHECK(*half.asymptotic_eta == doctest::Approx(2.0));

    const auto fail = global_report(binomial_weights(SpinSystem(20), 0.2));
    CHECK_FALSE(fail.bfy_holds);
    CHECK_FALSE(fail.r_max.has_value());
    CHECK_FALSE(fail.eta.has_value());

    std::vector<double> w(5, 0.2);
    const auto custom = global_report(custom_weights(SpinSystem(4), w));
    CHECK_FALSE(custom.closed_form_r.has_value());
}
