#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "opdet/evaluate/evaluate.hpp"

namespace opdet::evaluate {

/// Full evaluation report: per-class block, merged-class block, confusion
/// counts and percentages (raw and merged views).
nlohmann::json make_report_json(const EvalResult& raw, const EvalResult& merged,
                                const PipelineConfig& cfg);

void write_report(const nlohmann::json& report, const std::string& path);
nlohmann::json read_report(const std::string& path);

/// Fixed-width text table of the report's class rows (GT TP FP FN Pr Rc F1,
/// metrics at 2 decimals). Throws on malformed reports or class ids outside
/// 0..2.
std::string render_table(const nlohmann::json& report);

}  // namespace opdet::evaluate
