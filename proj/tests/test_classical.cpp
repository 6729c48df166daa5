#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spinj/classical.hpp"

using namespace spinj;

TEST_CASE("geometric probabilities sum to one and follow e^(theta k)") {
    for (double t : {-1.5, 0.0, 0.7}) {
        const RVector p = GeometricClassicalModel{9, t}.probabilities();
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p(4) / p(3) == doctest::Approx(std::exp(t)));
    }
}

TEST_CASE("expectation parameter derivative equals the Fisher information") {
    for (int n : {1, 4, 30}) {
        for (double t : {-2.0, -0.3, 0.05, 1.0}) {
            const double fd = oracle::central_diff([&](double x) { return geometric_expectation_param(n, x); }, t);
            CHECK(geometric_fisher_natural(n, t) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("Fisher information at theta = 0 is n(n+2)/12") {
    for (int n : {1, 2, 10, 200}) {
        CHECK(geometric_fisher_natural(n, 0.0) == doctest::Approx(n * (n + 2) / 12.0));
        CHECK(geometric_fisher_natural(n, 1e-9) == doctest::Approx(n * (n + 2) / 12.0).epsilon(1e-8));
        CHECK(geometric_expectation_param(n, 0.0) == doctest::Approx(n / 2.0));
    }
}

TEST_CASE("exact variance of k matches the Fisher information") {
    for (int n : {1, 10, 200}) {
        for (double t : {-2.0, -1.0, -0.1, 0.1, 1.0, 2.0}) {
            const auto m = GeometricClassicalModel{n, t}.exact_moments();
            CHECK(m.variance == doctest::Approx(geometric_fisher_natural(n, t)).epsilon(1e-10));
            CHECK(m.mean == doctest::Approx(geometric_expectation_param(n, t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("large |theta| stays finite") {
    CHECK(std::isfinite(geometric_fisher_natural(500, 30.0)));
    CHECK(geometric_expectation_param(500, 40.0) == doctest::Approx(500.0).epsilon(1e-10));
    CHECK(geometric_expectation_param(500, -40.0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("binomial estimator k/n") {
    for (int n : {1, 7, 100}) {
        for (double p : {0.2, 0.75}) {
            const auto m = binomial_estimator_moments(n, p);
            CHECK(m.mean == doctest::Approx(p).epsilon(1e-13));
            CHECK(m.variance == doctest::Approx(p * (1 - p) / n).epsilon(1e-12));
            CHECK(binomial_direct_mse(n, p) == doctest::Approx(p * (1 - p) / n));
        }
    }
}
