#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinj/local_bounds.hpp"
#include "spinj/state_families.hpp"

namespace spinj {

/// A numeric result that may be absent; absent cells carry a reason code.
struct Cell {
    std::optional<double> value;
    std::string reason;

    static Cell of(double v) { return {v, {}}; }
    static Cell absent(std::string why) { return {std::nullopt, std::move(why)}; }
    bool present() const { return value.has_value(); }

    friend bool operator==(const Cell&, const Cell&) = default;
};

struct SweepOutputs {
    bool sld = true;
    bool rld = true;
    bool hn_upper = true;
    bool global_eta = true;
    bool asymptotics = true;
};

struct SweepSpec {
    Family family = Family::Binomial;
    std::vector<double> params;         // p, r or a values; ignored for Custom
    std::vector<double> custom_weights; // Custom only; length must be n+1
    std::vector<int> n_values;          // nonempty, strictly ascending
    RMatrix weight_matrix = RMatrix::Identity(2, 2);
    SweepOutputs outputs;
    int threads = 0;
};

/// One (n, parameter) evaluation. Column order of the CSV form follows the
/// field order here.
struct SweepRow {
    int n = 0;
    Family family = Family::Binomial;
    double param = 0.0;
    Cell sld_bound;
    Cell rld_bound;
    Cell hn_upper;
    double bfy_lhs = 0.0;
    double bfy_rhs = 0.0;
    bool bfy_holds = false;
    Cell r_max;
    Cell eta;
    Cell asymptotic_eta;
    Cell eta_over_sld;
    /// "ok", or ';'-separated names of row invariants that failed.
    std::string checks = "ok";

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Throws DomainError on an invalid spec.
void validate(const SweepSpec& spec);

WeightDistribution make_weights(Family family, int n, double param,
                                const std::vector<double>& custom = {});

/// Evaluates a single grid point, degrading optional quantities to reason codes.
SweepRow evaluate_row(const WeightDistribution& w, const RMatrix& g, const SweepOutputs& outputs);

/// One row per (n, param), n-major, independent of thread scheduling.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

}  // namespace spinj
