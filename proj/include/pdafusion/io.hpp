#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdafusion/harness.hpp"

namespace pdaf {

enum class OutputFormat { csv, json };

/// "csv" or "json"; throws ValidationError otherwise.
OutputFormat parse_format(std::string_view name);

/// json for a ".json" extension, csv otherwise.
OutputFormat format_from_path(const std::filesystem::path& path);

/// Column order of run-record CSV files.
const std::vector<std::string>& run_csv_columns();

/// Column order of Monte Carlo summary CSV files.
const std::vector<std::string>& summary_csv_columns();

/// Doubles are written with 17 significant digits ("%.17g"), so parsing the
/// text reproduces every value exactly.
std::string to_csv(const RunRecord& record);
std::string to_csv(const MonteCarloSummary& summary);

nlohmann::json to_json(const RunRecord& record);
nlohmann::json to_json(const MonteCarloSummary& summary);
nlohmann::json to_json(const FrameData& frame);

RunRecord run_record_from_json(const nlohmann::json& j);
MonteCarloSummary summary_from_json(const nlohmann::json& j);
FrameData frame_data_from_json(const nlohmann::json& j);

std::vector<RunRow> run_rows_from_csv(std::string_view text);
std::vector<SummaryRow> summary_rows_from_csv(std::string_view text);

/// Writes the record or summary; throws IoError naming the path on failure.
void emit(const RunRecord& record, OutputFormat format, const std::filesystem::path& path);
void emit(const MonteCarloSummary& summary, OutputFormat format,
          const std::filesystem::path& path);

}  // namespace pdaf
