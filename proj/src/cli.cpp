#include "spinj/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "spinj/covariant_sim.hpp"
#include "spinj/errors.hpp"
#include "spinj/global_bounds.hpp"
#include "spinj/local_bounds.hpp"
#include "spinj/report_io.hpp"
#include "spinj/sweep.hpp"
#include "spinj/verify.hpp"

namespace spinj {

using nlohmann::json;

namespace {

struct FamilyArgs {
    std::string family;
    std::optional<int> n;
    std::vector<double> p, r, a;
    std::string weights_path;
    std::string weight_matrix_path;
    std::string format;
    std::string out_path;
    int threads = 0;
};

void add_family_options(CLI::App* cmd, FamilyArgs& fa, bool lists) {
    cmd->add_option("--family", fa.family, "binomial | geometric | delta | custom")->required();
    cmd->add_option("--p", fa.p, "binomial success probability")->delimiter(lists ? ',' : '\0');
    cmd->add_option("--r", fa.r, "geometric ratio (r != 1)")->delimiter(lists ? ',' : '\0');
    cmd->add_option("--a", fa.a, "delta position m = a")->delimiter(lists ? ',' : '\0');
    cmd->add_option("--weights", fa.weights_path, "custom weights file, one value per line");
    cmd->add_option("--weight-matrix", fa.weight_matrix_path, "2x2 PSD weight matrix file");
    cmd->add_option("--out", fa.out_path, "output file (default stdout)");
    cmd->add_option("--threads", fa.threads, "worker threads (default SPINJ_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::string token;
    const auto flush = [&] {
        if (!token.empty()) out.push_back(parse_double(token));
        token.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            flush();
        } else {
            token += c;
        }
    }
    flush();
    return out;
}

// Custom weights: one nonnegative real per line. Rescaled with a warning
// when the sum is visibly off.
std::vector<double> load_custom_weights(const std::string& path, std::ostream& err) {
    std::vector<double> w = parse_numbers(read_file(path));
    if (w.empty()) throw DomainError("weights file '" + path + "' is empty");
    double sum = 0.0;
    for (double x : w) {
        if (!std::isfinite(x) || x < 0.0) throw DomainError("weights must be finite and nonnegative");
        sum += x;
    }
    if (!(sum > 0.0)) throw DomainError("weights must have positive sum");
    if (std::abs(sum - 1.0) > 1e-9) {
        err << "warning: weights sum to " << format_double(sum) << ", normalizing\n";
    }
    for (double& x : w) x /= sum;
    return w;
}

RMatrix load_weight_matrix(const std::string& path) {
    if (path.empty()) return RMatrix::Identity(2, 2);
    const auto v = parse_numbers(read_file(path));
    if (v.size() != 4) throw DomainError("weight matrix file must hold 4 numbers");
    RMatrix g(2, 2);
    g << v[0], v[1], v[2], v[3];
    sqrt_psd(g);
    return g;
}

const std::vector<double>& family_params(const FamilyArgs& fa, Family f) {
    switch (f) {
        case Family::Binomial:
            if (fa.p.empty()) throw DomainError("binomial family needs --p");
            return fa.p;
        case Family::Geometric:
            if (fa.r.empty()) throw DomainError("geometric family needs --r");
            return fa.r;
        case Family::Delta:
            if (fa.a.empty()) throw DomainError("delta family needs --a");
            return fa.a;
        case Family::Custom: break;
    }
    static const std::vector<double> none;
    return none;
}

struct ResolvedFamily {
    Family family;
    std::vector<double> params;
    std::vector<double> custom;
};

ResolvedFamily resolve_family(const FamilyArgs& fa, std::ostream& err) {
    ResolvedFamily rf{family_from_string(fa.family), {}, {}};
    if (rf.family == Family::Custom) {
        if (fa.weights_path.empty()) throw DomainError("custom family needs --weights");
        rf.custom = load_custom_weights(fa.weights_path, err);
    } else {
        if (!fa.weights_path.empty()) throw DomainError("--weights applies to the custom family only");
        rf.params = family_params(fa, rf.family);
    }
    return rf;
}

int custom_n(const ResolvedFamily& rf, std::optional<int> n) {
    const int from_file = static_cast<int>(rf.custom.size()) - 1;
    if (n && *n != from_file) {
        throw DomainError("--n " + std::to_string(*n) + " needs " + std::to_string(*n + 1) + " weights, file has " +
                          std::to_string(rf.custom.size()));
    }
    return from_file;
}

void check_format(const std::string& format) {
    if (format != "csv" && format != "json") throw DomainError("--format must be csv or json");
}

void emit(const FamilyArgs& fa, std::ostream& out, const std::string& text) {
    if (fa.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(fa.out_path, std::ios::binary);
    if (!f) throw DomainError("cannot write '" + fa.out_path + "'");
    f << text;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

json tolerances() {
    return {{"hermitian_rel", 1e-12}, {"d_invariance", 1e-8}, {"x_star_constraint", 1e-9},
            {"fisher_condition", 1e12}, {"row_order", 1e-8}};
}

json matrix_rows(const RMatrix& m) {
    return {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}};
}

int cmd_bounds(const FamilyArgs& fa, const std::vector<std::string>& argv, std::ostream& out,
               std::ostream& err) {
    check_format(fa.format);
    const ResolvedFamily rf = resolve_family(fa, err);
    int n = 0;
    if (rf.family == Family::Custom) {
        n = custom_n(rf, fa.n);
    } else {
        if (!fa.n) throw DomainError("--n is required");
        n = *fa.n;
        if (rf.params.size() != 1) throw DomainError("bounds takes a single family parameter");
    }
    if (n < 1) throw DomainError("n must be at least 1");
    const RMatrix g = load_weight_matrix(fa.weight_matrix_path);
    const auto w = make_weights(rf.family, n, rf.params.empty() ? 0.0 : rf.params.front(), rf.custom);

    // Computation failures in the local bounds surface as exit 3 here rather
    // than degrading to reason codes as in a sweep.
    const BoundsReport local = bounds_report(unitary_model_derivs(diagonal_state(w)), g);
    const GlobalReport global = global_report(w);

    if (fa.format == "csv") {
        emit(fa, out, sweep_csv({evaluate_row(w, g, SweepOutputs{})}));
        return exit_code::kOk;
    }
    json payload = {{"family", to_string(w.family)}, {"n", n}, {"local", to_json(local)}, {"global", to_json(global)}};
    if (w.family != Family::Custom) payload["param"] = w.parameter;
    json prov = {{"tolerances", tolerances()}, {"weight_matrix", matrix_rows(g)}};
    emit(fa, out, json_text(output_record("bounds", argv, prov, payload)));
    return exit_code::kOk;
}

struct ScanArgs {
    std::optional<int> n_min, n_max;
    int n_step = 1;
    std::vector<int> n_list;
    std::vector<std::string> outputs;
};

std::vector<int> scan_n_values(const FamilyArgs& fa, const ScanArgs& sa) {
    if (!sa.n_list.empty()) {
        if (sa.n_min || sa.n_max || fa.n) throw DomainError("--n-list excludes --n, --n-min and --n-max");
        return sa.n_list;
    }
    if (fa.n) {
        if (sa.n_min || sa.n_max) throw DomainError("--n excludes --n-min and --n-max");
        return {*fa.n};
    }
    if (!sa.n_min || !sa.n_max) throw DomainError("scan needs --n-list, --n, or both --n-min and --n-max");
    if (sa.n_step < 1) throw DomainError("--n-step must be positive");
    std::vector<int> ns;
    for (long n = *sa.n_min; n <= *sa.n_max; n += sa.n_step) ns.push_back(static_cast<int>(n));
    return ns;
}

SweepOutputs parse_outputs(const std::vector<std::string>& names) {
    if (names.empty()) return {};
    SweepOutputs o{false, false, false, false, false};
    for (const auto& s : names) {
        if (s == "sld") o.sld = true;
        else if (s == "rld") o.rld = true;
        else if (s == "hn_upper") o.hn_upper = true;
        else if (s == "global_eta") o.global_eta = true;
        else if (s == "asymptotics") o.asymptotics = true;
        else throw DomainError("unknown output '" + s + "'");
    }
    return o;
}

int cmd_scan(const FamilyArgs& fa, const ScanArgs& sa, const std::vector<std::string>& argv, std::ostream& out,
             std::ostream& err) {
    check_format(fa.format);
    const ResolvedFamily rf = resolve_family(fa, err);
    SweepSpec spec;
    spec.family = rf.family;
    spec.params = rf.params;
    spec.custom_weights = rf.custom;
    spec.n_values = rf.family == Family::Custom ? std::vector<int>{custom_n(rf, fa.n)} : scan_n_values(fa, sa);
    spec.weight_matrix = load_weight_matrix(fa.weight_matrix_path);
    spec.outputs = parse_outputs(sa.outputs);
    spec.threads = fa.threads;
    const auto rows = run_sweep(spec);

    if (fa.format == "csv") {
        emit(fa, out, sweep_csv(rows));
        return exit_code::kOk;
    }
    json jrows = json::array();
    for (const auto& r : rows) jrows.push_back(to_json(r));
    json prov = {{"tolerances", tolerances()}, {"weight_matrix", matrix_rows(spec.weight_matrix)},
                 {"columns", sweep_columns()}};
    emit(fa, out, json_text(output_record("scan", argv, prov, {{"rows", jrows}})));
    return exit_code::kOk;
}

struct SimArgs {
    std::int64_t samples = 100000;
    std::uint64_t seed = 0;
    std::string theta = "0,0";
    std::string grid;
};

ParamPoint parse_theta(const std::string& text) {
    const auto v = parse_numbers(text);
    if (v.size() != 2) throw DomainError("--theta expects \"t1,t2\"");
    return ParamPoint(v[0], v[1]);
}

std::vector<ParamPoint> parse_grid(const std::string& text) {
    const std::string prefix = "fibonacci:";
    if (text.rfind(prefix, 0) != 0) throw DomainError("--grid expects fibonacci:K");
    int k = 0;
    try {
        std::size_t used = 0;
        k = std::stoi(text.substr(prefix.size()), &used);
        if (used != text.size() - prefix.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw DomainError("--grid expects fibonacci:K with integer K");
    }
    if (k < 1) throw DomainError("grid size must be at least 1");
    return fibonacci_grid(k);
}

const std::vector<std::string>& sim_columns() {
    static const std::vector<std::string> cols = {"theta1",      "theta2",       "mean_fidelity", "std_error",
                                                  "acceptance_rate", "samples_used", "proposals",
                                                  "mean_theta1", "mean_theta2"};
    return cols;
}

int cmd_simulate(const FamilyArgs& fa, const SimArgs& sa, const std::vector<std::string>& argv, std::ostream& out,
                 std::ostream& err) {
    check_format(fa.format);
    if (sa.samples < 1) throw DomainError("--samples must be at least 1");
    const ResolvedFamily rf = resolve_family(fa, err);
    int n = 0;
    if (rf.family == Family::Custom) {
        n = custom_n(rf, fa.n);
    } else {
        if (!fa.n) throw DomainError("--n is required");
        n = *fa.n;
        if (rf.params.size() != 1) throw DomainError("simulate takes a single family parameter");
    }
    if (n < 1) throw DomainError("n must be at least 1");
    const auto w = make_weights(rf.family, n, rf.params.empty() ? 0.0 : rf.params.front(), rf.custom);
    SimConfig cfg{w, parse_theta(sa.theta), sa.samples, sa.seed, fa.threads};

    std::vector<SimResult> results;
    std::optional<ScanResult> scan;
    if (!sa.grid.empty()) {
        scan = worst_case_scan(cfg, parse_grid(sa.grid));
        results = scan->points;
    } else {
        results.push_back(average_fidelity(cfg));
    }
    const double analytic = optimal_r(diagonal_state(w));

    if (fa.format == "csv") {
        std::ostringstream os;
        const auto& cols = sim_columns();
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
        os << "\r\n";
        for (const auto& r : results) {
            os << format_double(r.true_theta.theta1()) << ',' << format_double(r.true_theta.theta2()) << ','
               << format_double(r.mean_fidelity) << ',' << format_double(r.std_error) << ','
               << format_double(r.acceptance_rate) << ',' << r.samples_used << ',' << r.proposals << ','
               << format_double(r.mean_theta1) << ',' << format_double(r.mean_theta2) << "\r\n";
        }
        emit(fa, out, os.str());
        return exit_code::kOk;
    }
    json points = json::array();
    for (const auto& r : results) points.push_back(to_json(r));
    json payload = {{"family", to_string(w.family)}, {"n", n}, {"analytic_r", analytic}, {"points", points}};
    if (w.family != Family::Custom) payload["param"] = w.parameter;
    if (scan) {
        payload["argmin"] = scan->argmin;
        payload["min_mean_fidelity"] = scan->min_mean;
    }
    json prov = {{"seed", sa.seed}, {"samples", sa.samples}, {"rng", "mt19937_64 per (seed, index)"}};
    emit(fa, out, json_text(output_record("simulate", argv, prov, payload)));
    return exit_code::kOk;
}

struct VerifyArgs {
    VerifyOptions options;
    std::string format = "text";
    std::string out_path;
};

int cmd_verify(const VerifyArgs& va, const std::vector<std::string>& argv, std::ostream& out) {
    if (va.format != "text" && va.format != "json") throw DomainError("--format must be text or json");
    if (va.options.max_n < 1) throw DomainError("--max-n must be at least 1");
    const auto results = run_verification(va.options);
    const bool ok = all_passed(results);
    const auto passed = std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });

    std::ostringstream os;
    if (va.format == "json") {
        json checks = json::array();
        for (const auto& r : results) {
            checks.push_back({{"module", r.module}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        }
        json prov = {{"max_n", va.options.max_n}, {"mc_samples", va.options.mc_samples}};
        os << json_text(output_record("verify", argv, prov,
                                      {{"checks", checks}, {"passed", passed}, {"total", results.size()}}));
    } else {
        std::size_t wm = 6, wn = 5;
        for (const auto& r : results) {
            wm = std::max(wm, r.module.size());
            wn = std::max(wn, r.name.size());
        }
        os << std::left << std::setw(6) << "status" << "  " << std::setw(int(wm)) << "module" << "  "
           << std::setw(int(wn)) << "check" << "  detail\n";
        for (const auto& r : results) {
            os << std::setw(6) << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(int(wm)) << r.module << "  "
               << std::setw(int(wn)) << r.name << "  " << r.detail << '\n';
        }
        os << passed << "/" << results.size() << " checks passed\n";
    }
    FamilyArgs sink;
    sink.out_path = va.out_path;
    emit(sink, out, os.str());
    return ok ? exit_code::kOk : exit_code::kComputation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local and global precision bounds for spin-j probe families", "spinj"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", kLibraryVersion);

    FamilyArgs bounds_fa, scan_fa, sim_fa;
    bounds_fa.format = "json";
    scan_fa.format = "csv";
    sim_fa.format = "json";

    auto* bounds = app.add_subcommand("bounds", "local and global bounds at one (family, n)");
    add_family_options(bounds, bounds_fa, false);
    bounds->add_option("--n", bounds_fa.n, "number of bosons (j = n/2)");
    bounds->add_option("--format", bounds_fa.format, "csv | json")->capture_default_str();

    ScanArgs sa;
    auto* scan = app.add_subcommand("scan", "sweep bounds over n and family parameters");
    add_family_options(scan, scan_fa, true);
    scan->add_option("--n", scan_fa.n, "single n");
    scan->add_option("--n-min", sa.n_min);
    scan->add_option("--n-max", sa.n_max);
    scan->add_option("--n-step", sa.n_step)->capture_default_str();
    scan->add_option("--n-list", sa.n_list, "comma-separated ascending n values")->delimiter(',');
    scan->add_option("--outputs", sa.outputs, "subset of sld,rld,hn_upper,global_eta,asymptotics")->delimiter(',');
    scan->add_option("--format", scan_fa.format, "csv | json")->capture_default_str();

    SimArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo average fidelity of the covariant measurement");
    add_family_options(simulate, sim_fa, false);
    simulate->add_option("--n", sim_fa.n, "number of bosons (j = n/2)");
    simulate->add_option("--samples", sim_args.samples)->capture_default_str();
    simulate->add_option("--seed", sim_args.seed)->capture_default_str();
    simulate->add_option("--theta", sim_args.theta, "true parameter \"t1,t2\"")->capture_default_str();
    simulate->add_option("--grid", sim_args.grid, "worst-case scan grid, fibonacci:K");
    simulate->add_option("--format", sim_fa.format, "csv | json")->capture_default_str();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run the invariant and oracle suite");
    verify->add_option("--max-n", va.options.max_n, "largest n exercised")->capture_default_str();
    verify->add_option("--samples", va.options.mc_samples, "Monte Carlo samples per check")->capture_default_str();
    verify->add_option("--threads", va.options.threads)->check(CLI::NonNegativeNumber);
    verify->add_option("--format", va.format, "text | json")->capture_default_str();
    verify->add_option("--out", va.out_path);
    verify->add_flag("--inject-fault", va.options.inject_fault)->group("");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help / --version
            app.exit(e, out, err);
            return exit_code::kOk;
        }
        err << "error: " << e.what() << "\n";
        err << "run 'spinj --help' for usage\n";
        return exit_code::kUsage;
    }

    try {
        if (bounds->parsed()) return cmd_bounds(bounds_fa, args, out, err);
        if (scan->parsed()) return cmd_scan(scan_fa, sa, args, out, err);
        if (simulate->parsed()) return cmd_simulate(sim_fa, sim_args, args, out, err);
        if (verify->parsed()) return cmd_verify(va, args, out);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kUsage;
    } catch (const ComputationError& e) {
        err << "error [" << e.reason() << "]: " << e.what() << "\n";
        return exit_code::kComputation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kComputation;
    }
    return exit_code::kUsage;
}

}  // namespace spinj
