#include "spinj/spin_core.hpp"

#include <cmath>
#include <string>

#include "spinj/errors.hpp"

namespace spinj {

namespace {

constexpr Complex kI{0.0, 1.0};

// sqrt((j-m)(j+m+1)) for the m -> m+1 step starting at basis index k.
double ladder_coefficient(const SpinSystem& sys, Eigen::Index k) {
    const double j = sys.j();
    const double m = sys.m_of(k);
    return std::sqrt((j - m) * (j + m + 1.0));
}

}  // namespace

SpinSystem::SpinSystem(int n) : n_(n) {
    if (n < 0) throw DomainError("boson count must be nonnegative, got " + std::to_string(n));
}

Eigen::Index SpinSystem::index_of(double m) const {
    const double k = m + j();
    const double rounded = std::round(k);
    if (std::abs(k - rounded) > 1e-9 || rounded < 0 || rounded > n_) {
        throw DomainError("m = " + std::to_string(m) + " is not on the grid -j..j for n = " +
                          std::to_string(n_));
    }
    return static_cast<Eigen::Index>(rounded);
}

Operator ladder_plus(const SpinSystem& sys) {
    const auto d = sys.dim();
    Operator jp = Operator::Zero(d, d);
    for (Eigen::Index k = 0; k + 1 < d; ++k) jp(k + 1, k) = ladder_coefficient(sys, k);
    return jp;
}

Operator ladder_minus(const SpinSystem& sys) { return ladder_plus(sys).adjoint(); }

Operator angular_momentum(const SpinSystem& sys, Axis axis) {
    switch (axis) {
        case Axis::X: {
            const Operator jp = ladder_plus(sys);
            return 0.5 * (jp + jp.adjoint());
        }
        case Axis::Y: {
            const Operator jp = ladder_plus(sys);
            return (jp - jp.adjoint()) / (2.0 * kI);
        }
        case Axis::Z: {
            const auto d = sys.dim();
            Operator jz = Operator::Zero(d, d);
            for (Eigen::Index k = 0; k < d; ++k) jz(k, k) = sys.m_of(k);
            return jz;
        }
    }
    throw DomainError("unknown axis");
}

Operator casimir(const SpinSystem& sys) {
    const Operator j1 = angular_momentum(sys, Axis::X);
    const Operator j2 = angular_momentum(sys, Axis::Y);
    const Operator j3 = angular_momentum(sys, Axis::Z);
    return j1 * j1 + j2 * j2 + j3 * j3;
}

bool is_hermitian(const Operator& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

Operator exp_i_hermitian(const Operator& h) {
    if (!is_hermitian(h)) {
        throw ComputationError(reason::kNotHermitian, "generator not Hermitian");
    }
    const Operator sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> eig(sym);
    const CVector phases =
        eig.eigenvalues().unaryExpr([](double x) { return std::exp(kI * x); }).cast<Complex>();
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

Operator rotation(const SpinSystem& sys, double theta1, double theta2) {
    const Operator gen = theta1 * angular_momentum(sys, Axis::X) +
                         theta2 * angular_momentum(sys, Axis::Y);
    return exp_i_hermitian(gen);
}

Eigen::Index product_index(const SpinSystem& sys, bool spin_up, Eigen::Index k) {
    return (spin_up ? sys.dim() : 0) + k;
}

CouplingProjectors coupling_projectors(const SpinSystem& sys, bool allow_degenerate) {
    const auto d = sys.dim();
    const auto total = 2 * d;
    if (sys.n() == 0) {
        if (!allow_degenerate) {
            throw ComputationError(reason::kNoLowerSpace, "no lower coupled space for n = 0");
        }
        return {Operator::Identity(total, total), Operator::Zero(total, total)};
    }

    const double j = sys.j();
    const double norm = 2.0 * j + 1.0;
    Operator p_plus = Operator::Zero(total, total);
    Operator p_minus = Operator::Zero(total, total);

    // |j+1/2; m+1/2> = a|up>|j;m> + b|down>|j;m+1>, m = -j-1..j (2j+2 states).
    for (Eigen::Index k = -1; k < d; ++k) {
        const double m = static_cast<double>(k) - j;
        CVector v = CVector::Zero(total);
        if (k >= 0) v(product_index(sys, true, k)) = std::sqrt((j + m + 1.0) / norm);
        if (k + 1 < d) v(product_index(sys, false, k + 1)) = std::sqrt((j - m) / norm);
        p_plus.noalias() += v * v.adjoint();
    }
    // |j-1/2; m+1/2> = -b|up>|j;m> + a|down>|j;m+1>, m = -j..j-1 (2j states).
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        const double m = static_cast<double>(k) - j;
        CVector v = CVector::Zero(total);
        v(product_index(sys, true, k)) = -std::sqrt((j - m) / norm);
        v(product_index(sys, false, k + 1)) = std::sqrt((j + m + 1.0) / norm);
        p_minus.noalias() += v * v.adjoint();
    }
    return {std::move(p_plus), std::move(p_minus)};
}

Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

}  // namespace spinj
