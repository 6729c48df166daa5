#pragma once

// Optimal covariant measurement for global estimation of the SU(2) orbit:
// the coupling condition comparing the j+1/2 and j-1/2 overlaps of
// |1/2;1/2> (x) rho, the maximal worst-case average fidelity, and the
// family closed forms.

#include <optional>

#include "spinj/state_families.hpp"

namespace spinj {

struct BfySides {
    double lhs = 0.0;  // Tr P_{j+1/2}(|up><up| (x) rho) / (2j+2)
    double rhs = 0.0;  // Tr P_{j-1/2}(|up><up| (x) rho) / (2j)
};

BfySides bfy_sides(const DensityState& rho);

/// lhs >= rhs - 1e-12.
bool bfy_holds(const DensityState& rho);
bool bfy_holds(const BfySides& sides);

/// (2j+1)/(2j+2) Tr P_{j+1/2}(|up><up| (x) rho), attained by the covariant
/// POVM seeded with |j;j><j;j|. Throws ComputationError(BFY_FAILS) when the
/// coupling condition does not hold.
double optimal_r(const DensityState& rho);

/// (np + 1)/(n + 2). Requires n >= 1.
double binomial_r_closed(int n, double p);

/// (1 + E[k])/(n + 2) with E[k] the geometric mean occupation, evaluated in
/// the decaying r^{-(n+1)} form. Requires r > 1.
double geometric_r_closed(int n, double r);

/// 4r/(n(r-1)) - 8r/(n^2(r-1)): large-n expansion of 4(1 - geometric_r_closed).
double geometric_eta_expansion(int n, double r);

/// (n/2 + a + 1)/(n + 2). Requires a >= 0.
double delta_r_closed(int n, double a);

/// 4(1 - R).
inline double eta_from_r(double r) { return 4.0 * (1.0 - r); }

struct GlobalReport {
    int n = 0;
    BfySides sides;
    bool bfy_holds = false;
    std::optional<double> r_max;
    std::optional<double> eta;
    std::optional<double> closed_form_r;
    std::optional<double> asymptotic_eta;
};

/// Closed form for the named families (absent for Custom or outside the
/// family's closed-form domain).
std::optional<double> family_closed_form_r(const WeightDistribution& w);

/// Large-n reference for eta: 4(1-p), the two-term geometric expansion, or
/// 2 - 4a/n for delta. Absent for Custom.
std::optional<double> family_asymptotic_eta(const WeightDistribution& w);

GlobalReport global_report(const WeightDistribution& w);

}  // namespace spinj
