#pragma once

// Classical baselines obtained by measuring the probe in the number basis:
// the binomial direct estimator and the truncated geometric distribution as
// an exponential family.

#include "spinj/spin_core.hpp"

namespace spinj {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// p(1-p)/n: MSE of the estimator k/n.
double binomial_direct_mse(int n, double p);

/// Mean and variance of k/n under Binomial(n, p), by exact summation.
Moments binomial_estimator_moments(int n, double p);

/// P_theta(k) = (e^theta - 1)/(e^{theta(n+1)} - 1) e^{theta k}, k = 0..n.
struct GeometricClassicalModel {
    int n = 0;
    double theta = 0.0;  // natural parameter, log r

    RVector probabilities() const;
    /// Mean and variance of k, by exact summation.
    Moments exact_moments() const;
};

/// Expectation parameter: (n e^{t(n+1)} + 1)/(e^{t(n+1)} - 1) - 1/(e^t - 1),
/// with the removable singularity at t = 0 giving n/2.
double geometric_expectation_param(int n, double theta);

/// Fisher information of the natural parameter, d eta / d theta:
///   1/(4 sinh^2(t/2)) - (n+1)^2/(4 sinh^2((n+1)t/2)),
/// equal to n(n+2)/12 at t = 0.
double geometric_fisher_natural(int n, double theta);

}  // namespace spinj
