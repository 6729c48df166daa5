#pragma once

// Monte Carlo simulation of the covariant POVM seeded with |j;j><j;j|.
//
// Outcomes theta_hat have density (2j+1) <psi(theta_hat)| rho_theta |psi(theta_hat)>
// with respect to the invariant measure on the sphere, where
// psi(theta_hat) = U_{theta_hat} |j;j>. Draws use rejection sampling against
// the uniform proposal: the acceptance probability is the overlap itself.

#include <cstdint>
#include <random>
#include <vector>

#include "spinj/state_families.hpp"

namespace spinj {

struct SimConfig {
    WeightDistribution family;
    ParamPoint true_theta;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    int threads = 0;  // 0: SPINJ_THREADS or hardware concurrency
};

struct SimResult {
    ParamPoint true_theta;
    double mean_fidelity = 0.0;
    double std_error = 0.0;
    double acceptance_rate = 0.0;
    std::int64_t samples_used = 0;
    std::int64_t proposals = 0;
    // Informational: empirical mean of the estimates (covariant estimators
    // are biased in this chart).
    double mean_theta1 = 0.0;
    double mean_theta2 = 0.0;
};

/// U_theta |j;j> via the closed-form spin-coherent expansion.
CVector coherent_state(const SpinSystem& sys, const ParamPoint& theta);

/// Uniform draw on the sphere: cos|theta| uniform on [-1,1], phi uniform on [0, 2pi).
ParamPoint uniform_sphere_point(std::mt19937_64& rng);

/// Independent stream for sample `index` under `seed`.
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index);

class OutcomeSampler {
public:
    static constexpr std::int64_t kMaxProposals = 1'000'000;

    explicit OutcomeSampler(DensityState rho_theta);

    /// <psi(theta_hat)| rho_theta |psi(theta_hat)>, in [0, 1].
    double acceptance(const ParamPoint& theta_hat) const;

    /// One exact draw from the outcome law; `proposals` receives the number of
    /// proposals used. Throws ComputationError(PATHOLOGICAL_ACCEPTANCE) after
    /// kMaxProposals rejections.
    ParamPoint sample(std::mt19937_64& rng, std::int64_t* proposals = nullptr) const;

    const DensityState& state() const { return rho_; }

private:
    DensityState rho_;
};

/// Empirical average fidelity between the true point and the POVM outcomes.
/// Requires the coupling condition (so the seed |j;j> is optimal); result is
/// bit-identical for a given config regardless of thread count.
SimResult average_fidelity(const SimConfig& cfg);

struct ScanResult {
    std::vector<SimResult> points;
    std::size_t argmin = 0;
    double min_mean = 0.0;
};

/// average_fidelity at every grid point (cfg.true_theta is ignored).
ScanResult worst_case_scan(const SimConfig& cfg, const std::vector<ParamPoint>& grid);

/// k near-uniform points on the sphere, mapped to the parameter disc.
std::vector<ParamPoint> fibonacci_grid(int k);

}  // namespace spinj
