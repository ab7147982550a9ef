#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

#include "switchwalk/experiments.hpp"

namespace switchwalk {

/// Column order of the CSV form.
inline constexpr const char* report_columns[] = {"experiment", "quantity", "n",     "m",     "eps",
                                                 "gamma",      "alpha",    "kind",  "trials", "estimate",
                                                 "stderr",     "exact",    "seconds"};

/// 17 significant digits, "." decimal separator; round-trips any double.
std::string format_double(double value);

/// Header row plus one row per estimate. Absent optionals are empty cells.
/// With include_timing false the seconds column is left empty so output is
/// a pure function of the inputs.
void write_csv(const ExperimentReport& report, std::ostream& out, bool include_timing);

/// {"meta": {...}, "rows": [...]}; absent optionals are null.
nlohmann::json to_json(const ExperimentReport& report, bool include_timing);

/// Inverse of to_json for the row values (used for round-trip checks).
ExperimentReport from_json(const nlohmann::json& doc);

}  // namespace switchwalk
