#include "spinj/classical.hpp"

#include <cmath>

#include "spinj/errors.hpp"

namespace spinj {

namespace {

void check_n(int n) {
    if (n < 1) throw DomainError("n must be at least 1");
}

double inv_four_sinh2_half(double x) {
    const double s = std::sinh(0.5 * x);
    return 1.0 / (4.0 * s * s);
}

Moments moments_of(const RVector& prob, double scale) {
    Moments out;
    for (Eigen::Index k = 0; k < prob.size(); ++k) out.mean += prob(k) * (k * scale);
    for (Eigen::Index k = 0; k < prob.size(); ++k) {
        const double dev = k * scale - out.mean;
        out.variance += prob(k) * dev * dev;
    }
    return out;
}

}  // namespace

double binomial_direct_mse(int n, double p) {
    check_n(n);
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
    return p * (1.0 - p) / n;
}

Moments binomial_estimator_moments(int n, double p) {
    check_n(n);
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0,1)");
    RVector prob(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        prob(k) = std::exp(log_binom + k * std::log(p) + (n - k) * std::log1p(-p));
    }
    prob /= prob.sum();
    return moments_of(prob, 1.0 / n);
}

RVector GeometricClassicalModel::probabilities() const {
    check_n(n);
    RVector prob(n + 1);
    if (theta == 0.0) {
        prob.setConstant(1.0 / (n + 1));
        return prob;
    }
    // Scale by the largest term so e^{theta k} never overflows.
    const int top = theta > 0.0 ? n : 0;
    for (int k = 0; k <= n; ++k) prob(k) = std::exp(theta * (k - top));
    prob /= prob.sum();
    return prob;
}

Moments GeometricClassicalModel::exact_moments() const { return moments_of(probabilities(), 1.0); }

double geometric_expectation_param(int n, double theta) {
    check_n(n);
    const double big_n = n + 1.0;
    if (theta == 0.0) return 0.5 * n;
    if (std::abs(theta * big_n) < 1e-4) {
        // eta(t) = n/2 + t n(n+2)/12 + O(t^3)
        return 0.5 * n + theta * n * (n + 2.0) / 12.0;
    }
    if (theta > 0.0) {
        const double x = std::exp(-theta * big_n);
        return (n + x) / (1.0 - x) - 1.0 / std::expm1(theta);
    }
    const double e = std::exp(theta * big_n);
    return (n * e + 1.0) / std::expm1(theta * big_n) - 1.0 / std::expm1(theta);
}

double geometric_fisher_natural(int n, double theta) {
    check_n(n);
    const double big_n = n + 1.0;
    if (std::abs(theta * big_n) < 1e-3) {
        // (N^2 - 1)/12 - (N^4 - 1) t^2 / 240
        const double n2 = big_n * big_n;
        return (n2 - 1.0) / 12.0 - (n2 * n2 - 1.0) * theta * theta / 240.0;
    }
    return inv_four_sinh2_half(theta) - big_n * big_n * inv_four_sinh2_half(big_n * theta);
}

}  // namespace spinj
