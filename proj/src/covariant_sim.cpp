#include "spinj/covariant_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinj/errors.hpp"
#include "spinj/global_bounds.hpp"
#include "spinj/parallel.hpp"

namespace spinj {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kGridSeedStride = 0x9E3779B97F4A7C15ULL;

// e * log(x) with the convention 0 * log(0) = 0.
double scaled_log(double e, double x) { return e == 0.0 ? 0.0 : e * std::log(x); }

}  // namespace

CVector coherent_state(const SpinSystem& sys, const ParamPoint& theta) {
    // U|up> = c|up> + i e^{-i phi} s|down>; U^{(x)n}|up...up> expands binomially,
    // with k down-spins landing on m = j - k.
    const int n = sys.n();
    const double c = std::cos(0.5 * theta.norm());
    const double s = std::sin(0.5 * theta.norm());
    const Complex down_phase = Complex(0.0, 1.0) * std::polar(1.0, -theta.phi());
    const double ac = std::abs(c);
    CVector psi(sys.dim());
    Complex phase_pow(1.0, 0.0);
    for (int k = 0; k <= n; ++k) {
        const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        const double mag = std::exp(0.5 * log_binom + scaled_log(n - k, ac) + scaled_log(k, s));
        const double sign = (c < 0.0 && (n - k) % 2 == 1) ? -1.0 : 1.0;
        psi(n - k) = sign * mag * phase_pow;
        phase_pow *= down_phase;
    }
    return psi;
}

ParamPoint uniform_sphere_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double cos_polar = 2.0 * unit(rng) - 1.0;
    const double phi = 2.0 * kPi * unit(rng);
    return ParamPoint::from_polar(std::acos(std::clamp(cos_polar, -1.0, 1.0)), phi);
}

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

OutcomeSampler::OutcomeSampler(DensityState rho_theta) : rho_(std::move(rho_theta)) {}

double OutcomeSampler::acceptance(const ParamPoint& theta_hat) const {
    const CVector psi = coherent_state(rho_.sys, theta_hat);
    const double v = psi.dot(rho_.matrix * psi).real();
    return std::clamp(v, 0.0, 1.0);
}

ParamPoint OutcomeSampler::sample(std::mt19937_64& rng, std::int64_t* proposals) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::int64_t tries = 1; tries <= kMaxProposals; ++tries) {
        const ParamPoint candidate = uniform_sphere_point(rng);
        if (unit(rng) < acceptance(candidate)) {
            if (proposals) *proposals = tries;
            return candidate;
        }
    }
    throw ComputationError(reason::kAcceptance, "pathological acceptance");
}

SimResult average_fidelity(const SimConfig& cfg) {
    if (cfg.samples < 1) throw DomainError("samples must be at least 1");
    const DensityState rho = diagonal_state(cfg.family);
    if (!bfy_holds(rho)) {
        throw ComputationError(reason::kBfyFails, "covariant optimum requires the coupling condition");
    }
    const OutcomeSampler sampler(evolved_state(rho, cfg.true_theta));

    const auto count = static_cast<std::size_t>(cfg.samples);
    std::vector<double> fid(count);
    std::vector<double> est1(count);
    std::vector<double> est2(count);
    std::vector<std::int64_t> tries(count);
    parallel_for(count, resolve_threads(cfg.threads), [&](std::size_t i) {
        auto rng = sample_stream(cfg.seed, i);
        const ParamPoint hat = sampler.sample(rng, &tries[i]);
        fid[i] = fidelity_point(cfg.true_theta, hat);
        est1[i] = hat.theta1();
        est2[i] = hat.theta2();
    });

    // Serial reduction in index order keeps the result independent of threading.
    SimResult out;
    out.true_theta = cfg.true_theta;
    out.samples_used = cfg.samples;
    double sum = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        sum += fid[i];
        s1 += est1[i];
        s2 += est2[i];
        out.proposals += tries[i];
    }
    const double nn = static_cast<double>(count);
    out.mean_fidelity = sum / nn;
    double ss = 0.0;
    for (double f : fid) ss += (f - out.mean_fidelity) * (f - out.mean_fidelity);
    out.std_error = count > 1 ? std::sqrt(ss / (nn - 1.0) / nn) : 0.0;
    out.acceptance_rate = nn / static_cast<double>(out.proposals);
    out.mean_theta1 = s1 / nn;
    out.mean_theta2 = s2 / nn;
    return out;
}

ScanResult worst_case_scan(const SimConfig& cfg, const std::vector<ParamPoint>& grid) {
    if (grid.empty()) throw DomainError("theta grid must be nonempty");
    ScanResult out;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        SimConfig point = cfg;
        point.true_theta = grid[g];
        point.seed = cfg.seed + kGridSeedStride * g;
        out.points.push_back(average_fidelity(point));
    }
    for (std::size_t g = 0; g < out.points.size(); ++g) {
        if (out.points[g].mean_fidelity < out.points[out.argmin].mean_fidelity) out.argmin = g;
    }
    out.min_mean = out.points[out.argmin].mean_fidelity;
    return out;
}

std::vector<ParamPoint> fibonacci_grid(int k) {
    if (k < 1) throw DomainError("grid size must be at least 1");
    std::vector<ParamPoint> out;
    out.reserve(static_cast<std::size_t>(k));
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < k; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / k;
        const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double az = golden * i;
        out.push_back(from_bloch({rxy * std::cos(az), rxy * std::sin(az), z}));
    }
    return out;
}

}  // namespace spinj
