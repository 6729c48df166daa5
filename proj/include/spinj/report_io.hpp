#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spinj/covariant_sim.hpp"
#include "spinj/global_bounds.hpp"
#include "spinj/local_bounds.hpp"
#include "spinj/sweep.hpp"

namespace spinj {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kLibraryVersion = "0.1.0";

/// 17 significant digits, locale independent.
std::string format_double(double v);
double parse_double(std::string_view text);

/// Column names of the sweep CSV, in SweepRow field order.
const std::vector<std::string>& sweep_columns();

/// RFC-4180 style CSV with a header row. Absent cells hold their reason code.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(std::string_view text);

nlohmann::json to_json(const Cell& c);
nlohmann::json to_json(const SweepRow& row);
nlohmann::json to_json(const BoundsReport& report);
nlohmann::json to_json(const GlobalReport& report);
nlohmann::json to_json(const SimResult& result);

/// Versioned envelope: schema_version, command echo, provenance, payload.
nlohmann::json output_record(const std::string& command, const std::vector<std::string>& argv,
                             nlohmann::json provenance, nlohmann::json payload);

}  // namespace spinj
