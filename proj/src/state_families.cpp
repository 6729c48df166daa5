#include "spinj/state_families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "spinj/errors.hpp"

namespace spinj {

namespace {

constexpr double kPi = std::numbers::pi;

void check_normalized(const RVector& w) {
    if ((w.array() < 0.0).any()) throw DomainError("weights must be nonnegative");
    if (std::abs(w.sum() - 1.0) > 1e-12) throw DomainError("weights must sum to 1");
}

}  // namespace

std::string to_string(Family f) {
    switch (f) {
        case Family::Binomial: return "binomial";
        case Family::Geometric: return "geometric";
        case Family::Delta: return "delta";
        case Family::Custom: return "custom";
    }
    return "custom";
}

Family family_from_string(const std::string& name) {
    if (name == "binomial") return Family::Binomial;
    if (name == "geometric") return Family::Geometric;
    if (name == "delta") return Family::Delta;
    if (name == "custom" || name == "custom-file") return Family::Custom;
    throw DomainError("unknown family '" + name + "'");
}

WeightDistribution binomial_weights(const SpinSystem& sys, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("binomial p must lie in (0,1)");
    const int n = sys.n();
    RVector w(sys.dim());
    // log-space keeps n in the thousands finite.
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (int k = 0; k <= n; ++k) {
        const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        w(k) = std::exp(log_binom + k * lp + (n - k) * lq);
    }
    w /= w.sum();
    return {sys, std::move(w), Family::Binomial, p};
}

WeightDistribution geometric_weights(const SpinSystem& sys, double r) {
    if (!(r > 0.0)) throw DomainError("geometric r must be positive");
    if (r == 1.0) throw DomainError("r must differ from 1");
    const int n = sys.n();
    RVector w(sys.dim());
    // Scale by the largest term: r^{k-n} (r > 1) or r^{k} (r < 1), then
    // normalize with the decaying geometric sum.
    if (r > 1.0) {
        const double inv = 1.0 / r;
        const double norm = (1.0 - std::pow(inv, n + 1)) / (1.0 - inv);
        double term = 1.0;
        for (int k = n; k >= 0; --k) {
            w(k) = term / norm;
            term *= inv;
        }
    } else {
        const double norm = (1.0 - std::pow(r, n + 1)) / (1.0 - r);
        double term = 1.0;
        for (int k = 0; k <= n; ++k) {
            w(k) = term / norm;
            term *= r;
        }
    }
    return {sys, std::move(w), Family::Geometric, r};
}

WeightDistribution delta_weights(const SpinSystem& sys, double a) {
    const auto k = sys.index_of(a);
    RVector w = RVector::Zero(sys.dim());
    w(k) = 1.0;
    return {sys, std::move(w), Family::Delta, a};
}

WeightDistribution custom_weights(const SpinSystem& sys, std::vector<double> weights,
                                  bool renormalize) {
    if (static_cast<Eigen::Index>(weights.size()) != sys.dim()) {
        throw DomainError("expected " + std::to_string(sys.dim()) + " weights, got " +
                          std::to_string(weights.size()));
    }
    RVector w = Eigen::Map<const RVector>(weights.data(), sys.dim());
    if (!w.allFinite()) throw DomainError("weights must be finite");
    if (renormalize) {
        if ((w.array() < 0.0).any()) throw DomainError("weights must be nonnegative");
        const double s = w.sum();
        if (!(s > 0.0)) throw DomainError("weights must have positive sum");
        w /= s;
    }
    check_normalized(w);
    return {sys, std::move(w), Family::Custom, 0.0};
}

ParamPoint::ParamPoint(double theta1, double theta2) : t1_(theta1), t2_(theta2) {
    if (!std::isfinite(theta1) || !std::isfinite(theta2)) throw DomainError("theta must be finite");
    if (norm() > kPi + 1e-12) throw DomainError("|theta| must not exceed pi");
}

ParamPoint ParamPoint::from_polar(double norm, double phi) {
    // theta1 + i theta2 = norm e^{-i phi}
    return {norm * std::cos(phi), -norm * std::sin(phi)};
}

double ParamPoint::norm() const noexcept { return std::hypot(t1_, t2_); }

double ParamPoint::phi() const noexcept {
    if (t1_ == 0.0 && t2_ == 0.0) return 0.0;
    return std::atan2(-t2_, t1_);
}

DensityState diagonal_state(const WeightDistribution& w) {
    return {w.sys, w.weights.cast<Complex>().asDiagonal().toDenseMatrix()};
}

DensityState evolved_state(const DensityState& rho, const ParamPoint& theta) {
    const Operator u = rotation(rho.sys, theta.theta1(), theta.theta2());
    Operator out = u * rho.matrix * u.adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
    return {rho.sys, std::move(out)};
}

double fidelity_point(const ParamPoint& theta, const ParamPoint& theta_hat) {
    const double a = 0.5 * theta.norm();
    const double b = 0.5 * theta_hat.norm();
    const Complex phase = std::polar(1.0, theta_hat.phi() - theta.phi());
    const Complex amp = std::cos(a) * std::cos(b) + phase * std::sin(a) * std::sin(b);
    return std::clamp(std::norm(amp), 0.0, 1.0);
}

double error_function_point(const ParamPoint& theta_hat) {
    // 4(1 - cos^2(x/2)) = 4 sin^2(x/2), written to avoid cancellation near 0.
    const double s = std::sin(0.5 * theta_hat.norm());
    return 4.0 * s * s;
}

std::array<double, 3> bloch_point(const ParamPoint& theta) {
    // U_theta|up> = cos(|t|/2)|up> + i e^{i phi} sin(|t|/2)|down>, so the
    // Bloch azimuth is phi + pi/2.
    const double polar = theta.norm();
    const double az = theta.phi() + 0.5 * kPi;
    return {std::sin(polar) * std::cos(az), std::sin(polar) * std::sin(az), std::cos(polar)};
}

ParamPoint from_bloch(const std::array<double, 3>& v) {
    const double polar = std::acos(std::clamp(v[2], -1.0, 1.0));
    const double az = std::atan2(v[1], v[0]);
    return ParamPoint::from_polar(polar, az - 0.5 * kPi);
}

bool is_valid_state(const DensityState& rho, double tol) {
    if (!is_hermitian(rho.matrix, tol)) return false;
    if (std::abs(rho.matrix.trace() - Complex(1.0)) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Operator> eig(rho.matrix, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff() >= -tol;
}

}  // namespace spinj
