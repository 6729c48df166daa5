#include "spinj/report_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "spinj/errors.hpp"

namespace spinj {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell& c) { return c.value ? format_double(*c.value) : c.reason; }

Cell parse_cell(const std::string& text) {
    if (text.empty()) return Cell::absent("");
    const char first = text.front();
    if (first == '-' || first == '+' || first == '.' || (first >= '0' && first <= '9') ||
        text == "inf" || text == "nan") {
        return Cell::of(parse_double(text));
    }
    return Cell::absent(text);
}

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        any = true;
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            fields.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(fields));
            fields.clear();
            any = false;
        } else {
            field += c;
        }
    }
    if (any) {
        fields.push_back(std::move(field));
        records.push_back(std::move(fields));
    }
    return records;
}

json matrix_json(const RMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

json matrix_json(const Eigen::MatrixXcd& m) {
    return {{"re", matrix_json(RMatrix(m.real()))}, {"im", matrix_json(RMatrix(m.imag()))}};
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    if (text == "nan") return std::nan("");
    if (text == "inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw DomainError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = {
        "n",      "family",  "param",   "sld_bound", "rld_bound",      "hn_upper",     "bfy_lhs",
        "bfy_rhs", "bfy_holds", "r_max", "eta",       "asymptotic_eta", "eta_over_sld", "checks"};
    return cols;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    const auto& cols = sweep_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\r\n";
    for (const auto& r : rows) {
        const std::vector<std::string> fields = {
            std::to_string(r.n),        to_string(r.family),       format_double(r.param),
            cell_text(r.sld_bound),     cell_text(r.rld_bound),    cell_text(r.hn_upper),
            format_double(r.bfy_lhs),   format_double(r.bfy_rhs),  r.bfy_holds ? "true" : "false",
            cell_text(r.r_max),         cell_text(r.eta),          cell_text(r.asymptotic_eta),
            cell_text(r.eta_over_sld),  r.checks};
        for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
        out << "\r\n";
    }
    return out.str();
}

std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
    const auto records = split_csv(text);
    if (records.empty() || records.front() != sweep_columns()) {
        throw DomainError("unexpected sweep CSV header");
    }
    std::vector<SweepRow> rows;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i];
        if (f.size() != sweep_columns().size()) throw DomainError("malformed sweep CSV record");
        SweepRow r;
        r.n = std::stoi(f[0]);
        r.family = family_from_string(f[1]);
        r.param = parse_double(f[2]);
        r.sld_bound = parse_cell(f[3]);
        r.rld_bound = parse_cell(f[4]);
        r.hn_upper = parse_cell(f[5]);
        r.bfy_lhs = parse_double(f[6]);
        r.bfy_rhs = parse_double(f[7]);
        r.bfy_holds = f[8] == "true";
        r.r_max = parse_cell(f[9]);
        r.eta = parse_cell(f[10]);
        r.asymptotic_eta = parse_cell(f[11]);
        r.eta_over_sld = parse_cell(f[12]);
        r.checks = f[13];
        rows.push_back(std::move(r));
    }
    return rows;
}

json to_json(const Cell& c) {
    if (c.value) return *c.value;
    return {{"absent", c.reason}};
}

json to_json(const SweepRow& r) {
    return {{"n", r.n},
            {"family", to_string(r.family)},
            {"param", r.param},
            {"sld_bound", to_json(r.sld_bound)},
            {"rld_bound", to_json(r.rld_bound)},
            {"hn_upper", to_json(r.hn_upper)},
            {"bfy_lhs", r.bfy_lhs},
            {"bfy_rhs", r.bfy_rhs},
            {"bfy_holds", r.bfy_holds},
            {"r_max", to_json(r.r_max)},
            {"eta", to_json(r.eta)},
            {"asymptotic_eta", to_json(r.asymptotic_eta)},
            {"eta_over_sld", to_json(r.eta_over_sld)},
            {"checks", r.checks}};
}

json to_json(const BoundsReport& b) {
    json out = {{"weight", matrix_json(b.weight)},
                {"sld_fisher", matrix_json(b.sld_f)},
                {"sld_bound", b.sld_bound},
                {"sld_upper", b.sld_upper},
                {"d_invariant", b.d_invariant},
                {"d_invariance_residual", b.d_invariance_residual},
                {"d_matrix", matrix_json(b.d_matrix)},
                {"hn_upper_from_x_star", b.hn_upper_from_x_star}};
    if (b.rld_bound) {
        out["rld_fisher"] = matrix_json(*b.rld_f);
        out["rld_bound"] = *b.rld_bound;
    } else {
        out["rld_bound"] = {{"absent", b.rld_reason}};
    }
    if (b.hn_d_invariant) out["hn_d_invariant"] = *b.hn_d_invariant;
    return out;
}

json to_json(const GlobalReport& g) {
    const auto opt = [](const std::optional<double>& v, const char* why) -> json {
        if (v) return *v;
        return {{"absent", why}};
    };
    return {{"n", g.n},
            {"bfy_lhs", g.sides.lhs},
            {"bfy_rhs", g.sides.rhs},
            {"bfy_holds", g.bfy_holds},
            {"r_max", opt(g.r_max, reason::kBfyFails)},
            {"eta", opt(g.eta, reason::kBfyFails)},
            {"closed_form_r", opt(g.closed_form_r, reason::kNoAsymptotic)},
            {"asymptotic_eta", opt(g.asymptotic_eta, reason::kNoAsymptotic)}};
}

json to_json(const SimResult& s) {
    return {{"true_theta", {s.true_theta.theta1(), s.true_theta.theta2()}},
            {"mean_fidelity", s.mean_fidelity},
            {"std_error", s.std_error},
            {"acceptance_rate", s.acceptance_rate},
            {"samples_used", s.samples_used},
            {"proposals", s.proposals},
            {"mean_estimate", {s.mean_theta1, s.mean_theta2}}};
}

json output_record(const std::string& command, const std::vector<std::string>& argv,
                   json provenance, json payload) {
    provenance["library_version"] = kLibraryVersion;
    return {{"schema_version", kSchemaVersion},
            {"command", {{"name", command}, {"argv", argv}}},
            {"provenance", std::move(provenance)},
            {"result", std::move(payload)}};
}

}  // namespace spinj
