#include "spinj/local_bounds.hpp"

#include <algorithm>
#include <cmath>

#include "spinj/errors.hpp"

namespace spinj {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kKernelRelTol = 1e-14;
constexpr double kConditionLimit = 1e12;

// Tr(A B) in O(d^2).
Complex trace_product(const Operator& a, const Operator& b) {
    return a.cwiseProduct(b.transpose()).sum();
}

bool is_exactly_diagonal(const Operator& a) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            if (r != c && a(r, c) != Complex(0.0)) return false;
        }
    }
    return true;
}

void require_hermitian(const Operator& a, const char* what) {
    if (!is_hermitian(a, 1e-10)) {
        throw ComputationError(reason::kNotHermitian, std::string(what) + " not Hermitian");
    }
}

}  // namespace

bool Eigenbasis::full_rank() const {
    return std::all_of(in_support.begin(), in_support.end(), [](bool b) { return b; });
}

Operator Eigenbasis::to_eigen(const Operator& a) const {
    if (diagonal) return a;
    return vectors.adjoint() * a * vectors;
}

Operator Eigenbasis::from_eigen(const Operator& a) const {
    if (diagonal) return a;
    return vectors * a * vectors.adjoint();
}

Eigenbasis eigenbasis(const DensityState& rho) {
    const Operator& m = rho.matrix;
    const auto d = m.rows();
    Eigenbasis out;
    out.in_support.resize(static_cast<std::size_t>(d));
    if (is_exactly_diagonal(m)) {
        out.diagonal = true;
        out.values = m.diagonal().real();
        out.vectors = Operator::Identity(d, d);
        for (Eigen::Index a = 0; a < d; ++a) {
            out.in_support[static_cast<std::size_t>(a)] = out.values(a) > 0.0;
            out.values(a) = std::max(out.values(a), 0.0);
        }
        return out;
    }
    require_hermitian(m, "density matrix");
    Eigen::SelfAdjointEigenSolver<Operator> eig(0.5 * (m + m.adjoint()));
    out.values = eig.eigenvalues();
    out.vectors = eig.eigenvectors();
    const double cutoff = kKernelRelTol * std::max(out.values.maxCoeff(), 0.0);
    for (Eigen::Index a = 0; a < d; ++a) {
        const bool support = out.values(a) > cutoff;
        out.in_support[static_cast<std::size_t>(a)] = support;
        if (!support) out.values(a) = 0.0;
    }
    return out;
}

ModelPoint unitary_model_derivs(const DensityState& rho) {
    const Operator j1 = angular_momentum(rho.sys, Axis::X);
    const Operator j2 = angular_momentum(rho.sys, Axis::Y);
    const Operator& r = rho.matrix;
    return {rho, {kI * (r * j1 - j1 * r), kI * (r * j2 - j2 * r)}};
}

Operator sld_solve(const Eigenbasis& basis, const Operator& d) {
    require_hermitian(d, "derivative");
    const Operator de = basis.to_eigen(d);
    const auto n = basis.dim();
    const double scale = std::max(1.0, de.cwiseAbs().maxCoeff());
    Operator le = Operator::Zero(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        for (Eigen::Index a = 0; a < n; ++a) {
            const bool sa = basis.in_support[static_cast<std::size_t>(a)];
            const bool sb = basis.in_support[static_cast<std::size_t>(b)];
            if (sa || sb) {
                le(a, b) = 2.0 * de(a, b) / (basis.values(a) + basis.values(b));
            } else if (std::abs(de(a, b)) > 1e-10 * scale) {
                throw ComputationError(reason::kLeavesSupport, "derivative leaves support");
            }
        }
    }
    Operator l = basis.from_eigen(le);
    return 0.5 * (l + l.adjoint());
}

Operator sld_solve(const DensityState& rho, const Operator& d) {
    return sld_solve(eigenbasis(rho), d);
}

Operator rld_solve(const Eigenbasis& basis, const Operator& d) {
    if (!basis.full_rank()) {
        throw ComputationError(reason::kRldSingular, "RLD undefined for singular state");
    }
    const Operator de = basis.to_eigen(d);
    const RVector inv = basis.values.cwiseInverse();
    const Operator le = inv.cast<Complex>().asDiagonal() * de;
    return basis.from_eigen(le);
}

Operator rld_solve(const DensityState& rho, const Operator& d) {
    return rld_solve(eigenbasis(rho), d);
}

Operator d_superoperator(const Eigenbasis& basis, const Operator& x) {
    require_hermitian(x, "operand");
    const Operator xe = basis.to_eigen(x);
    const auto n = basis.dim();
    Operator de = Operator::Zero(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        for (Eigen::Index a = 0; a < n; ++a) {
            const double s = basis.values(a) + basis.values(b);
            if (s > 0.0) de(a, b) = 2.0 * kI * (basis.values(b) - basis.values(a)) / s * xe(a, b);
        }
    }
    Operator out = basis.from_eigen(de);
    return 0.5 * (out + out.adjoint());
}

Operator d_superoperator(const DensityState& rho, const Operator& x) {
    return d_superoperator(eigenbasis(rho), x);
}

std::vector<Operator> sld_operators(const ModelPoint& model) {
    const Eigenbasis basis = eigenbasis(model.rho);
    std::vector<Operator> out;
    out.reserve(model.derivs.size());
    for (const auto& d : model.derivs) out.push_back(sld_solve(basis, d));
    return out;
}

RMatrix sld_fisher(const ModelPoint& model, const std::vector<Operator>& slds) {
    const auto k = static_cast<Eigen::Index>(slds.size());
    RMatrix f(k, k);
    std::vector<Operator> rho_l;
    rho_l.reserve(slds.size());
    for (const auto& l : slds) rho_l.push_back(model.rho.matrix * l);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i; j < k; ++j) {
            const double v = trace_product(rho_l[static_cast<std::size_t>(i)],
                                           slds[static_cast<std::size_t>(j)]).real();
            f(i, j) = v;
            f(j, i) = v;
        }
    }
    return f;
}

RMatrix sld_fisher(const ModelPoint& model) { return sld_fisher(model, sld_operators(model)); }

CMatrix rld_fisher(const ModelPoint& model) {
    const Eigenbasis basis = eigenbasis(model.rho);
    std::vector<Operator> rlds;
    for (const auto& d : model.derivs) rlds.push_back(rld_solve(basis, d));
    const auto k = static_cast<Eigen::Index>(rlds.size());
    CMatrix f(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const Operator left = rlds[static_cast<std::size_t>(i)] * model.rho.matrix;
        for (Eigen::Index j = 0; j < k; ++j) {
            f(i, j) = trace_product(left, rlds[static_cast<std::size_t>(j)]);
        }
    }
    return f;
}

DInvariance d_invariance_check(const ModelPoint& model, const std::vector<Operator>& slds) {
    const Eigenbasis basis = eigenbasis(model.rho);
    const RMatrix gram = sld_fisher(model, slds);
    const auto inner = [&](const Operator& a, const Operator& b) {
        return trace_product(model.rho.matrix * a, b).real();
    };
    Eigen::CompleteOrthogonalDecomposition<RMatrix> solver(gram);

    DInvariance out;
    for (const auto& l : slds) {
        const Operator dl = d_superoperator(basis, l);
        const double norm2 = inner(dl, dl);
        if (norm2 <= 0.0) continue;
        RVector rhs(static_cast<Eigen::Index>(slds.size()));
        for (std::size_t k = 0; k < slds.size(); ++k) rhs(static_cast<Eigen::Index>(k)) = inner(slds[k], dl);
        const RVector coeff = solver.solve(rhs);
        Operator rem = dl;
        for (std::size_t k = 0; k < slds.size(); ++k) rem -= coeff(static_cast<Eigen::Index>(k)) * slds[k];
        const double rel = std::sqrt(std::max(inner(rem, rem), 0.0) / norm2);
        out.residual = std::max(out.residual, rel);
    }
    out.holds = out.residual < 1e-8;
    return out;
}

RMatrix d_matrix(const ModelPoint& model, const std::vector<Operator>& slds) {
    const Eigenbasis basis = eigenbasis(model.rho);
    const auto k = static_cast<Eigen::Index>(slds.size());
    RMatrix out(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const Operator dl = d_superoperator(basis, slds[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < k; ++j) {
            out(i, j) = trace_product(dl, model.derivs[static_cast<std::size_t>(j)]).real();
        }
    }
    return out;
}

RMatrix invert_fisher(const RMatrix& f) {
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(0.5 * (f + f.transpose()));
    const RVector& ev = eig.eigenvalues();
    const double hi = ev.cwiseAbs().maxCoeff();
    const double lo = ev.minCoeff();
    if (!(hi > 0.0) || !(lo > hi / kConditionLimit)) {
        throw ComputationError(reason::kFisherSingular, "Fisher matrix singular");
    }
    return eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

CMatrix invert_fisher(const CMatrix& f) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (f + f.adjoint()));
    const RVector& ev = eig.eigenvalues();
    const double hi = ev.cwiseAbs().maxCoeff();
    const double lo = ev.minCoeff();
    if (!(hi > 0.0) || !(lo > hi / kConditionLimit)) {
        throw ComputationError(reason::kFisherSingular, "RLD Fisher matrix singular");
    }
    return eig.eigenvectors() * ev.cwiseInverse().cast<Complex>().asDiagonal() *
           eig.eigenvectors().adjoint();
}

RMatrix sqrt_psd(const RMatrix& g) {
    if (g.rows() != g.cols() || (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff())) {
        throw DomainError("weight matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(g);
    RVector ev = eig.eigenvalues();
    if (ev.minCoeff() < -1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff())) {
        throw DomainError("weight matrix must be positive semidefinite");
    }
    ev = ev.cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

double trace_norm(const RMatrix& a) {
    Eigen::JacobiSVD<RMatrix> svd(a);
    return svd.singularValues().sum();
}

double sld_bound(const RMatrix& f, const RMatrix& g) {
    return (g * invert_fisher(f)).trace();
}

double sld_upper(const RMatrix& f, const RMatrix& g) {
    return static_cast<double>(f.rows()) * sld_bound(f, g);
}

double rld_bound(const CMatrix& f_tilde, const RMatrix& g) {
    const CMatrix sg = sqrt_psd(g).cast<Complex>();
    const CMatrix a = sg * invert_fisher(f_tilde) * sg;
    return a.real().trace() + trace_norm(a.imag());
}

double d_invariant_bound(const RMatrix& f, const RMatrix& d, const RMatrix& g) {
    const RMatrix finv = invert_fisher(f);
    const RMatrix sg = sqrt_psd(g);
    return (g * finv).trace() + 0.5 * trace_norm(sg * finv * d * finv * sg);
}

XStarResult hn_upper_from_x_star(const ModelPoint& model, const RMatrix& f,
                                 const std::vector<Operator>& slds, const RMatrix& g) {
    const RMatrix finv = invert_fisher(f);
    const auto k = static_cast<Eigen::Index>(slds.size());
    std::vector<Operator> xs;
    xs.reserve(slds.size());
    for (Eigen::Index a = 0; a < k; ++a) {
        Operator x = Operator::Zero(model.rho.matrix.rows(), model.rho.matrix.cols());
        for (Eigen::Index b = 0; b < k; ++b) x += finv(a, b) * slds[static_cast<std::size_t>(b)];
        xs.push_back(std::move(x));
    }

    XStarResult out;
    out.z.resize(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        const Operator rho_x = model.rho.matrix * xs[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < k; ++b) {
            out.z(a, b) = trace_product(rho_x, xs[static_cast<std::size_t>(b)]);
            const double c = trace_product(xs[static_cast<std::size_t>(a)],
                                           model.derivs[static_cast<std::size_t>(b)]).real();
            out.constraint_residual = std::max(out.constraint_residual, std::abs(c - (a == b ? 1.0 : 0.0)));
        }
    }
    if (out.constraint_residual > 1e-9) {
        throw ComputationError(reason::kConstraintViolated, "X* constraint violated");
    }
    const RMatrix sg = sqrt_psd(g);
    out.value = (g * out.z.real()).trace() + trace_norm(sg * out.z.imag() * sg);
    return out;
}

double eq_nmi_fisher(const WeightDistribution& w) {
    const auto& p = w.weights;
    const double j = w.sys.j();
    double total = 0.0;
    for (Eigen::Index k = 0; k + 1 < p.size(); ++k) {
        const double s = p(k + 1) + p(k);
        if (s <= 0.0) continue;
        const double m = w.sys.m_of(k);
        const double diff = p(k + 1) - p(k);
        total += diff * diff / s * (j - m) * (j + m + 1.0);
    }
    return total;
}

BoundsReport bounds_report(const ModelPoint& model, const RMatrix& g) {
    BoundsReport out;
    out.weight = g;
    const std::vector<Operator> slds = sld_operators(model);
    out.sld_f = sld_fisher(model, slds);
    out.sld_bound = sld_bound(out.sld_f, g);
    out.sld_upper = static_cast<double>(out.sld_f.rows()) * out.sld_bound;

    try {
        out.rld_f = rld_fisher(model);
        out.rld_bound = rld_bound(*out.rld_f, g);
    } catch (const ComputationError& e) {
        out.rld_f.reset();
        out.rld_bound.reset();
        out.rld_reason = e.reason();
    }

    const DInvariance dinv = d_invariance_check(model, slds);
    out.d_invariant = dinv.holds;
    out.d_invariance_residual = dinv.residual;
    out.d_matrix = d_matrix(model, slds);
    if (out.d_invariant) out.hn_d_invariant = d_invariant_bound(out.sld_f, out.d_matrix, g);

    out.hn_upper_from_x_star = hn_upper_from_x_star(model, out.sld_f, slds, g).value;
    return out;
}

}  // namespace spinj
