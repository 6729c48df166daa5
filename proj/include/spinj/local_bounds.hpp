#pragma once

// Local (Cramer-Rao type) precision bounds for a parametrized state family at
// one point: SLD and RLD solvers, Fisher matrices, the commutation
// superoperator D, and the SLD / RLD / Holevo-Nagaoka related bounds.

#include <optional>
#include <string>
#include <vector>

#include "spinj/state_families.hpp"

namespace spinj {

using CMatrix = Eigen::MatrixXcd;

/// Eigen-decomposition of a density state, with the kernel identified.
///
/// For an exactly diagonal matrix the eigenvalues are its diagonal entries
/// and the kernel is the set of exact zeros, so very small but positive
/// weights (geometric tails of order 1e-30) stay in the support. Otherwise
/// eigenvalues at or below 1e-14 * lambda_max are treated as kernel and
/// clamped to zero.
struct Eigenbasis {
    RVector values;
    Operator vectors;
    std::vector<bool> in_support;
    bool diagonal = false;

    Eigen::Index dim() const { return values.size(); }
    bool full_rank() const;
    Operator to_eigen(const Operator& a) const;
    Operator from_eigen(const Operator& a) const;
};

Eigenbasis eigenbasis(const DensityState& rho);

/// D_j = d rho / d theta_j at one model point.
struct ModelPoint {
    DensityState rho;
    std::vector<Operator> derivs;

    int parameters() const { return static_cast<int>(derivs.size()); }
};

/// D_1 = i[rho, J1], D_2 = i[rho, J2]: derivatives of U_theta rho U_theta^dagger at theta = 0.
ModelPoint unitary_model_derivs(const DensityState& rho);

/// Hermitian L with D = (L rho + rho L)/2. The kernel-kernel block of L is 0;
/// throws ComputationError(LEAVES_SUPPORT) if D is nonzero there.
Operator sld_solve(const DensityState& rho, const Operator& d);
Operator sld_solve(const Eigenbasis& basis, const Operator& d);

/// L~ = rho^{-1} D. Throws ComputationError(RLD_SINGULAR) for rank-deficient rho.
Operator rld_solve(const DensityState& rho, const Operator& d);
Operator rld_solve(const Eigenbasis& basis, const Operator& d);

/// Hermitian D(X) with i[X, rho] = (rho D(X) + D(X) rho)/2; zero on the kernel-kernel block.
Operator d_superoperator(const DensityState& rho, const Operator& x);
Operator d_superoperator(const Eigenbasis& basis, const Operator& x);

std::vector<Operator> sld_operators(const ModelPoint& model);

/// F_ij = Re Tr rho L_i L_j.
RMatrix sld_fisher(const ModelPoint& model, const std::vector<Operator>& slds);
RMatrix sld_fisher(const ModelPoint& model);

/// F~_ij = Tr L~_i rho L~_j.
CMatrix rld_fisher(const ModelPoint& model);

struct DInvariance {
    bool holds = false;
    double residual = 0.0;
};

/// Projects each D(L_j) on span{L_k} in the SLD inner product Re Tr rho A B
/// and reports the largest relative remainder; holds iff residual < 1e-8.
DInvariance d_invariance_check(const ModelPoint& model, const std::vector<Operator>& slds);

/// D_jk = Tr D(L_j) D_k (real antisymmetric).
RMatrix d_matrix(const ModelPoint& model, const std::vector<Operator>& slds);

/// Symmetric-eigendecomposition inverse with a condition-number guard of
/// 1e12. Throws ComputationError(FISHER_SINGULAR).
RMatrix invert_fisher(const RMatrix& f);
CMatrix invert_fisher(const CMatrix& f);

/// sqrt of a symmetric PSD weight matrix; throws DomainError otherwise.
RMatrix sqrt_psd(const RMatrix& g);

/// Sum of singular values.
double trace_norm(const RMatrix& a);

/// Tr G F^{-1}.
double sld_bound(const RMatrix& f, const RMatrix& g);
/// d * Tr G F^{-1}.
double sld_upper(const RMatrix& f, const RMatrix& g);

/// Tr Re(sqrt(G) F~^{-1} sqrt(G)) + Tr |Im(sqrt(G) F~^{-1} sqrt(G))|.
double rld_bound(const CMatrix& f_tilde, const RMatrix& g);

/// Tr G F^{-1} + (1/2) Tr |sqrt(G) F^{-1} D F^{-1} sqrt(G)|, valid for D-invariant models.
double d_invariant_bound(const RMatrix& f, const RMatrix& d, const RMatrix& g);

struct XStarResult {
    double value = 0.0;
    CMatrix z;                       // Z_jk = Tr rho X_j X_k
    double constraint_residual = 0;  // max |Tr X_j D_k - delta_jk|
};

/// Evaluates the Holevo-Nagaoka objective at X*_k = sum_j (F^{-1})_kj L_j.
/// Throws ComputationError(XSTAR_CONSTRAINT) if Tr X_j D_k = delta_jk fails
/// by more than 1e-9.
XStarResult hn_upper_from_x_star(const ModelPoint& model, const RMatrix& f,
                                 const std::vector<Operator>& slds, const RMatrix& g);

/// Closed-form SLD Fisher information F_11 = F_22 of the unitary model on a
/// diagonal probe:
///   sum_{m=-j}^{j-1} (p_{m+1}-p_m)^2 / (p_{m+1}+p_m) * (j-m)(j+m+1).
double eq_nmi_fisher(const WeightDistribution& w);

struct BoundsReport {
    RMatrix weight;
    RMatrix sld_f;
    double sld_bound = 0.0;
    double sld_upper = 0.0;

    std::optional<CMatrix> rld_f;
    std::optional<double> rld_bound;
    std::string rld_reason;

    bool d_invariant = false;
    double d_invariance_residual = 0.0;
    RMatrix d_matrix;
    std::optional<double> hn_d_invariant;

    double hn_upper_from_x_star = 0.0;
};

/// All local bounds for one model point. RLD quantities are left empty (with
/// a reason code) when rho is singular; other failures propagate.
BoundsReport bounds_report(const ModelPoint& model, const RMatrix& g);

}  // namespace spinj
