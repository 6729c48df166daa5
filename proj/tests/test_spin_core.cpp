#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spinj/errors.hpp"
#include "spinj/spin_core.hpp"

using namespace spinj;

namespace {

const Complex I{0.0, 1.0};

double max_abs(const Operator& a) { return a.cwiseAbs().maxCoeff(); }

// Total-spin projector built from the Casimir of J_{1/2} + J_j; independent of
// any Clebsch-Gordan table.
Operator casimir_projector(const SpinSystem& sys, bool upper) {
    const SpinSystem half(1);
    const auto d = sys.dim();
    Operator c = Operator::Zero(2 * d, 2 * d);
    for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
        const Operator t = kron(angular_momentum(half, ax), Operator::Identity(d, d)) +
                           kron(Operator::Identity(2, 2), angular_momentum(sys, ax));
        c += t * t;
    }
    const double j = sys.j();
    const double hi = (j + 0.5) * (j + 1.5), lo = (j - 0.5) * (j + 0.5);
    const Operator id = Operator::Identity(2 * d, 2 * d);
    return upper ? Operator((c - lo * id) / (hi - lo)) : Operator((hi * id - c) / (hi - lo));
}

}  // namespace

TEST_CASE("spin-1/2 operators are half the Pauli matrices") {
    const SpinSystem s(1);
    Operator sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 0.5, 0.5, 0;
    sy << 0, 0.5 * I, -0.5 * I, 0;  // ascending m: row 0 is m = -1/2
    sz << -0.5, 0, 0, 0.5;
    CHECK(max_abs(angular_momentum(s, Axis::X) - sx) < 1e-15);
    CHECK(max_abs(angular_momentum(s, Axis::Y) - sy) < 1e-15);
    CHECK(max_abs(angular_momentum(s, Axis::Z) - sz) < 1e-15);
}

TEST_CASE("spin-1 raising operator has sqrt(2) entries") {
    const Operator jp = ladder_plus(SpinSystem(2));
    CHECK(jp(1, 0).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(jp(2, 1).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::abs(jp(0, 1)) == 0.0);
}

TEST_CASE("commutation relations and Casimir up to n = 30") {
    for (int n = 0; n <= 30; ++n) {
        const SpinSystem s(n);
        const Operator x = angular_momentum(s, Axis::X), y = angular_momentum(s, Axis::Y),
                       z = angular_momentum(s, Axis::Z);
        CHECK(max_abs(x * y - y * x - I * z) < 1e-10);
        CHECK(max_abs(y * z - z * y - I * x) < 1e-10);
        CHECK(max_abs(z * x - x * z - I * y) < 1e-10);
        const auto d = s.dim();
        CHECK(max_abs(casimir(s) - s.j() * (s.j() + 1) * Operator::Identity(d, d)) < 1e-10);
    }
}

TEST_CASE("index_of round trips and rejects off-grid m") {
    const SpinSystem s(3);
    for (Eigen::Index k = 0; k < s.dim(); ++k) CHECK(s.index_of(s.m_of(k)) == k);
    CHECK_THROWS_AS(s.index_of(0.0), DomainError);
    CHECK_THROWS_AS(s.index_of(2.5), DomainError);
    CHECK_THROWS_AS(SpinSystem(-1), DomainError);
}

TEST_CASE("exp_i_hermitian agrees with a Taylor oracle") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int n : {1, 2, 5, 9}) {
        const SpinSystem s(n);
        const Operator h = g(rng) * angular_momentum(s, Axis::X) + g(rng) * angular_momentum(s, Axis::Y) +
                           g(rng) * angular_momentum(s, Axis::Z);
        CHECK(max_abs(exp_i_hermitian(h) - oracle::expm_taylor(I * h)) < 1e-10);
    }
}

TEST_CASE("exp_i_hermitian refuses a non-Hermitian generator") {
    Operator a = Operator::Zero(2, 2);
    a(0, 1) = 1.0;
    try {
        exp_i_hermitian(a);
        FAIL("expected an error");
    } catch (const ComputationError& e) {
        CHECK(e.reason() == "NOT_HERMITIAN");
    }
}

TEST_CASE("rotation by pi about J1 flips the spin") {
    const SpinSystem s(4);
    const Operator u = rotation(s, M_PI, 0.0);
    for (Eigen::Index k = 0; k < s.dim(); ++k) CHECK(std::abs(u(s.dim() - 1 - k, k)) == doctest::Approx(1.0));
}

TEST_CASE("coupling projectors equal the Casimir spectral projectors") {
    for (int n = 1; n <= 12; ++n) {
        const SpinSystem s(n);
        const auto p = coupling_projectors(s);
        CHECK(max_abs(p.p_plus - casimir_projector(s, true)) < 1e-10);
        CHECK(max_abs(p.p_minus - casimir_projector(s, false)) < 1e-10);
    }
}

TEST_CASE("projector algebra and ranks") {
    for (int n = 1; n <= 30; ++n) {
        const auto p = coupling_projectors(SpinSystem(n));
        const auto d = p.p_plus.rows();
        CHECK(max_abs(p.p_plus * p.p_plus - p.p_plus) < 1e-10);
        CHECK(max_abs(p.p_plus + p.p_minus - Operator::Identity(d, d)) < 1e-10);
        CHECK(max_abs(p.p_plus * p.p_minus) < 1e-10);
        CHECK(p.p_plus.trace().real() == doctest::Approx(n + 2.0));
        CHECK(p.p_minus.trace().real() == doctest::Approx(double(n)));
    }
}

TEST_CASE("stretched state |up> (x) |j;j> lies in the upper space") {
    const SpinSystem s(5);
    const auto p = coupling_projectors(s);
    const auto idx = product_index(s, true, s.dim() - 1);
    CHECK(p.p_plus(idx, idx).real() == doctest::Approx(1.0));
    // Condon-Shortley: <j+1/2, j-1/2 | 1/2 -1/2; j j> = sqrt(1/(2j+1)) > 0 entry pattern.
    const auto down = product_index(s, false, s.dim() - 1);
    CHECK(p.p_plus(down, down).real() == doctest::Approx(1.0 / (s.n() + 1.0)));
}

TEST_CASE("n = 0 has no lower coupled space") {
    CHECK_THROWS_AS(coupling_projectors(SpinSystem(0)), ComputationError);
    const auto p = coupling_projectors(SpinSystem(0), true);
    CHECK(max_abs(p.p_plus - Operator::Identity(2, 2)) == 0.0);
    CHECK(max_abs(p.p_minus) == 0.0);
}

TEST_CASE("kron of identities") {
    const Operator k = kron(Operator::Identity(2, 2), Operator::Identity(3, 3));
    CHECK(max_abs(k - Operator::Identity(6, 6)) == 0.0);
}
