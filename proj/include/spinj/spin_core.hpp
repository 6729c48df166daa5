#pragma once

// Spin-j operator algebra on the (n+1)-dimensional symmetric sector of two
// bosonic modes. Basis index k = 0..n corresponds to |j; m = k - j>, so m is
// ascending along rows and columns.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace spinj {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// n bosons in two modes, viewed as a spin j = n/2.
class SpinSystem {
public:
    explicit SpinSystem(int n);

    int n() const noexcept { return n_; }
    double j() const noexcept { return 0.5 * n_; }
    Eigen::Index dim() const noexcept { return n_ + 1; }

    /// m value of basis index k.
    double m_of(Eigen::Index k) const noexcept { return static_cast<double>(k) - j(); }
    /// Basis index of m; m must lie on the grid -j..j.
    Eigen::Index index_of(double m) const;

    friend bool operator==(const SpinSystem&, const SpinSystem&) = default;

private:
    int n_;
};

enum class Axis { X = 1, Y = 2, Z = 3 };

Operator ladder_plus(const SpinSystem& sys);
Operator ladder_minus(const SpinSystem& sys);
Operator angular_momentum(const SpinSystem& sys, Axis axis);

/// J1^2 + J2^2 + J3^2 evaluated by explicit matrix products.
Operator casimir(const SpinSystem& sys);

bool is_hermitian(const Operator& a, double tol = 1e-12);

/// exp(i h) for Hermitian h, by spectral decomposition. Throws
/// ComputationError(NOT_HERMITIAN) if h is not Hermitian.
Operator exp_i_hermitian(const Operator& h);

/// U_theta = exp(i(theta1 J1 + theta2 J2)) on the spin-j irrep.
Operator rotation(const SpinSystem& sys, double theta1, double theta2);

/// Projectors onto total spin j+1/2 and j-1/2 in H_{1/2} (x) H_j. The
/// spin-1/2 factor is the slow index: row 2-block 0 is m=-1/2, block 1 is
/// m=+1/2, each block ordered like the spin-j basis.
struct CouplingProjectors {
    Operator p_plus;
    Operator p_minus;
};

/// Builds the coupled basis from Condon-Shortley Clebsch-Gordan
/// coefficients. n = 0 has no j-1/2 space: throws unless `allow_degenerate`,
/// in which case p_plus = I and p_minus = 0.
CouplingProjectors coupling_projectors(const SpinSystem& sys, bool allow_degenerate = false);

/// Index of |1/2; s> (x) |j; m> in the coupled-product ordering above.
Eigen::Index product_index(const SpinSystem& sys, bool spin_up, Eigen::Index k);

/// Kronecker product a (x) b.
Operator kron(const Operator& a, const Operator& b);

}  // namespace spinj
