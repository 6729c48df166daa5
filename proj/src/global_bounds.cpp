#include "spinj/global_bounds.hpp"

#include <algorithm>
#include <cmath>

#include "spinj/errors.hpp"

namespace spinj {

namespace {

// Tr P (|up><up| (x) rho) only touches the up-up block of P.
double up_block_overlap(const Operator& projector, const DensityState& rho) {
    const auto d = rho.sys.dim();
    const Operator block = projector.block(d, d, d, d);
    return block.cwiseProduct(rho.matrix.transpose()).sum().real();
}

}  // namespace

BfySides bfy_sides(const DensityState& rho) {
    const CouplingProjectors proj = coupling_projectors(rho.sys);
    const double two_j = static_cast<double>(rho.sys.n());
    return {up_block_overlap(proj.p_plus, rho) / (two_j + 2.0),
            up_block_overlap(proj.p_minus, rho) / two_j};
}

bool bfy_holds(const BfySides& sides) { return sides.lhs >= sides.rhs - 1e-12; }

bool bfy_holds(const DensityState& rho) { return bfy_holds(bfy_sides(rho)); }

double optimal_r(const DensityState& rho) {
    const BfySides sides = bfy_sides(rho);
    if (!bfy_holds(sides)) {
        throw ComputationError(reason::kBfyFails, "Theorem 1 precondition violated");
    }
    // (2j+1)/(2j+2) * (2j+2) * lhs
    return std::clamp((rho.sys.n() + 1.0) * sides.lhs, 0.0, 1.0);
}

double binomial_r_closed(int n, double p) {
    if (n < 1) throw DomainError("n must be at least 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("binomial p must lie in (0,1)");
    return (n * p + 1.0) / (n + 2.0);
}

double geometric_r_closed(int n, double r) {
    if (n < 1) throw DomainError("n must be at least 1");
    if (!(r > 1.0)) throw DomainError("geometric closed form requires r > 1");
    const double x = std::pow(r, -(n + 1.0));
    // (n r^{n+1} + 1)/(r^{n+1} - 1) = (n + x)/(1 - x)
    const double mean = (n + x) / (1.0 - x) - 1.0 / (r - 1.0);
    return (1.0 + mean) / (n + 2.0);
}

double geometric_eta_expansion(int n, double r) {
    if (n < 1) throw DomainError("n must be at least 1");
    if (!(r > 1.0)) throw DomainError("geometric expansion requires r > 1");
    const double nn = n;
    return 4.0 * r / (nn * (r - 1.0)) - 8.0 * r / (nn * nn * (r - 1.0));
}

double delta_r_closed(int n, double a) {
    if (n < 1) throw DomainError("n must be at least 1");
    if (a < 0.0) throw ComputationError(reason::kBfyFails, "delta closed form requires a >= 0");
    if (a > 0.5 * n) throw DomainError("a must not exceed j");
    return (0.5 * n + a + 1.0) / (n + 2.0);
}

std::optional<double> family_closed_form_r(const WeightDistribution& w) {
    const int n = w.sys.n();
    if (n < 1) return std::nullopt;
    switch (w.family) {
        case Family::Binomial: return binomial_r_closed(n, w.parameter);
        case Family::Geometric:
            if (w.parameter > 1.0) return geometric_r_closed(n, w.parameter);
            return std::nullopt;
        case Family::Delta:
            if (w.parameter >= 0.0) return delta_r_closed(n, w.parameter);
            return std::nullopt;
        case Family::Custom: return std::nullopt;
    }
    return std::nullopt;
}

std::optional<double> family_asymptotic_eta(const WeightDistribution& w) {
    const int n = w.sys.n();
    if (n < 1) return std::nullopt;
    switch (w.family) {
        case Family::Binomial: return 4.0 * (1.0 - w.parameter);
        case Family::Geometric:
            if (w.parameter > 1.0) return geometric_eta_expansion(n, w.parameter);
            return std::nullopt;
        case Family::Delta: return 2.0 - 4.0 * w.parameter / n;
        case Family::Custom: return std::nullopt;
    }
    return std::nullopt;
}

GlobalReport global_report(const WeightDistribution& w) {
    GlobalReport out;
    out.n = w.sys.n();
    const DensityState rho = diagonal_state(w);
    out.sides = bfy_sides(rho);
    out.bfy_holds = bfy_holds(out.sides);
    if (out.bfy_holds) {
        out.r_max = std::clamp((out.n + 1.0) * out.sides.lhs, 0.0, 1.0);
        out.eta = eta_from_r(*out.r_max);
        out.closed_form_r = family_closed_form_r(w);
    }
    out.asymptotic_eta = family_asymptotic_eta(w);
    return out;
}

}  // namespace spinj
