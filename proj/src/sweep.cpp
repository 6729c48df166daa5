#include "spinj/sweep.hpp"

#include <cmath>

#include "spinj/errors.hpp"
#include "spinj/global_bounds.hpp"
#include "spinj/parallel.hpp"

namespace spinj {

namespace {

constexpr double kOrderTol = 1e-8;

void append_check(std::string& checks, const char* name) {
    if (checks == "ok") checks.clear();
    if (!checks.empty()) checks += ';';
    checks += name;
}

bool ordered(double lo, double x, double hi) {
    const double slack = kOrderTol * std::max(1.0, std::abs(hi));
    return x >= lo - slack && x <= hi + slack;
}

}  // namespace

void validate(const SweepSpec& spec) {
    if (spec.n_values.empty()) throw DomainError("n range is empty");
    for (std::size_t i = 0; i < spec.n_values.size(); ++i) {
        if (spec.n_values[i] < 1) throw DomainError("n values must be at least 1");
        if (i > 0 && spec.n_values[i] <= spec.n_values[i - 1]) {
            throw DomainError("n values must be strictly ascending");
        }
    }
    if (spec.family == Family::Custom) {
        if (spec.n_values.size() != 1) throw DomainError("custom weights fix a single n");
    } else if (spec.params.empty()) {
        throw DomainError("family parameter list is empty");
    }
    if (spec.weight_matrix.rows() != 2 || spec.weight_matrix.cols() != 2) {
        throw DomainError("weight matrix must be 2x2");
    }
    sqrt_psd(spec.weight_matrix);
    // Parameter domains are checked eagerly so a bad spec aborts up front.
    for (int n : spec.n_values) {
        if (spec.family == Family::Custom) {
            make_weights(spec.family, n, 0.0, spec.custom_weights);
        } else {
            for (double p : spec.params) make_weights(spec.family, n, p);
        }
    }
}

WeightDistribution make_weights(Family family, int n, double param, const std::vector<double>& custom) {
    const SpinSystem sys(n);
    switch (family) {
        case Family::Binomial: return binomial_weights(sys, param);
        case Family::Geometric: return geometric_weights(sys, param);
        case Family::Delta: return delta_weights(sys, param);
        case Family::Custom: return custom_weights(sys, custom);
    }
    throw DomainError("unknown family");
}

SweepRow evaluate_row(const WeightDistribution& w, const RMatrix& g, const SweepOutputs& outputs) {
    SweepRow row;
    row.n = w.sys.n();
    row.family = w.family;
    row.param = w.parameter;

    const DensityState rho = diagonal_state(w);
    const auto not_requested = Cell::absent(reason::kNotComputed);
    row.sld_bound = row.rld_bound = row.hn_upper = not_requested;
    row.r_max = row.eta = row.asymptotic_eta = row.eta_over_sld = not_requested;

    std::optional<BoundsReport> local;
    if (outputs.sld || outputs.rld || outputs.hn_upper) {
        try {
            local = bounds_report(unitary_model_derivs(rho), g);
        } catch (const ComputationError& e) {
            row.sld_bound = row.rld_bound = row.hn_upper = Cell::absent(e.reason());
        }
    }
    if (local) {
        if (outputs.sld) row.sld_bound = Cell::of(local->sld_bound);
        if (outputs.rld) {
            row.rld_bound = local->rld_bound ? Cell::of(*local->rld_bound) : Cell::absent(local->rld_reason);
        }
        if (outputs.hn_upper) row.hn_upper = Cell::of(local->hn_upper_from_x_star);

        const double s = local->sld_bound;
        if (local->rld_bound && local->d_invariant && !ordered(s, *local->rld_bound, 2.0 * s)) {
            append_check(row.checks, "rld_order");
        }
        if (!ordered(s, local->hn_upper_from_x_star, 2.0 * s)) append_check(row.checks, "hn_order");
    }

    const GlobalReport global = global_report(w);
    row.bfy_lhs = global.sides.lhs;
    row.bfy_rhs = global.sides.rhs;
    row.bfy_holds = global.bfy_holds;
    const double completeness = (row.n + 2.0) * row.bfy_lhs + row.n * row.bfy_rhs;
    if (std::abs(completeness - 1.0) > 1e-10) append_check(row.checks, "slice_completeness");

    if (outputs.global_eta) {
        if (global.r_max) {
            row.r_max = Cell::of(*global.r_max);
            row.eta = Cell::of(*global.eta);
            if (global.closed_form_r && std::abs(*global.r_max - *global.closed_form_r) > 1e-9) {
                append_check(row.checks, "closed_form");
            }
            if (local) row.eta_over_sld = Cell::of(*global.eta / local->sld_bound);
        } else {
            row.r_max = row.eta = row.eta_over_sld = Cell::absent(reason::kBfyFails);
        }
    }
    if (outputs.asymptotics) {
        row.asymptotic_eta = global.asymptotic_eta ? Cell::of(*global.asymptotic_eta)
                                                   : Cell::absent(reason::kNoAsymptotic);
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    validate(spec);
    struct Job {
        int n;
        double param;
    };
    std::vector<Job> jobs;
    for (int n : spec.n_values) {
        if (spec.family == Family::Custom) {
            jobs.push_back({n, 0.0});
        } else {
            for (double p : spec.params) jobs.push_back({n, p});
        }
    }
    std::vector<SweepRow> rows(jobs.size());
    parallel_for(jobs.size(), resolve_threads(spec.threads), [&](std::size_t i) {
        const auto w = make_weights(spec.family, jobs[i].n, jobs[i].param, spec.custom_weights);
        rows[i] = evaluate_row(w, spec.weight_matrix, spec.outputs);
    });
    return rows;
}

}  // namespace spinj
