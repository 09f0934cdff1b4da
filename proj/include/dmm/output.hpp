#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dmm/harness.hpp"

namespace dmm {

// Columns: k, z_0 .. z_{d-1}, r, e_norm, gap. Numbers use 17 significant
// digits; undefined values are left blank.
std::string to_csv(const RunRecord& record);
void emit_csv(const RunRecord& record, const std::string& path);

nlohmann::ordered_json to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::ordered_json& j);
void emit_json(const RunRecord& record, const std::string& path);

nlohmann::ordered_json to_json(const BoundReport& report);
BoundReport bound_from_json(const nlohmann::ordered_json& j);

// Log-scale line chart, one polyline per series. Non-positive or non-finite
// values are dropped.
std::string to_svg(const std::vector<Series>& series, const std::string& title);
void emit_svg(const std::vector<Series>& series, const std::string& path,
              const std::string& title = "");

std::string sweep_table_csv(const std::string& axis, const std::vector<SweepCell>& cells);

// Writes `content` to `path`, creating parent directories; throws
// std::runtime_error when the path cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace dmm
