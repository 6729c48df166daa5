#pragma once

#include <array>
#include <string>
#include <vector>

#include "spinj/spin_core.hpp"

namespace spinj {

enum class Family { Binomial, Geometric, Delta, Custom };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Probe weights p_m over m = -j..j (index k = j+m).
struct WeightDistribution {
    SpinSystem sys;
    RVector weights;
    Family family = Family::Custom;
    double parameter = 0.0;  // p, r or a; unused for Custom

    double at_m(double m) const { return weights(sys.index_of(m)); }
};

/// p_m = C(n, j+m) p^{j+m} (1-p)^{j-m}.
WeightDistribution binomial_weights(const SpinSystem& sys, double p);

/// p_m proportional to r^{j+m}, normalized without forming r^{n+1}.
WeightDistribution geometric_weights(const SpinSystem& sys, double r);

/// All weight on m = a.
WeightDistribution delta_weights(const SpinSystem& sys, double a);

/// Validates nonnegativity and normalization (1e-12). With `renormalize`,
/// weights whose sum is off are rescaled instead of rejected.
WeightDistribution custom_weights(const SpinSystem& sys, std::vector<double> weights,
                                  bool renormalize = false);

/// theta = (theta1, theta2) on the disc |theta| <= pi.
class ParamPoint {
public:
    ParamPoint() = default;
    ParamPoint(double theta1, double theta2);

    /// Point with norm |theta| and phase phi, where e^{-i phi}|theta| = theta1 + i theta2.
    static ParamPoint from_polar(double norm, double phi);

    double theta1() const noexcept { return t1_; }
    double theta2() const noexcept { return t2_; }
    double norm() const noexcept;
    /// 0 at the origin.
    double phi() const noexcept;

private:
    double t1_ = 0.0;
    double t2_ = 0.0;
};

struct DensityState {
    SpinSystem sys;
    Operator matrix;
};

DensityState diagonal_state(const WeightDistribution& w);

/// U_theta rho U_theta^dagger.
DensityState evolved_state(const DensityState& rho, const ParamPoint& theta);

/// Fidelity between U_theta|1/2;1/2> and U_thetahat|1/2;1/2>.
double fidelity_point(const ParamPoint& theta, const ParamPoint& theta_hat);

/// 4(1 - R(0, theta_hat)).
double error_function_point(const ParamPoint& theta_hat);

/// Bloch vector of U_theta|1/2;1/2>: polar angle |theta|. Satisfies
/// fidelity_point(a, b) = (1 + v_a . v_b) / 2.
std::array<double, 3> bloch_point(const ParamPoint& theta);
ParamPoint from_bloch(const std::array<double, 3>& v);

/// Checks the density-state invariants (Hermitian, trace 1, PSD to `tol`).
bool is_valid_state(const DensityState& rho, double tol = 1e-10);

}  // namespace spinj
