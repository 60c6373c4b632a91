#pragma once

#include "koopmem/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace koopmem {

inline constexpr const char* kToolVersion = "0.1.0";

/// Built-in hyperparameter presets: "synthetic", "flu", "bike".
ForecastConfig profile_config(std::string_view name);
std::vector<std::string> profile_names();

/// Applies `key = value` lines (blank lines and '#' comments ignored) on top
/// of `config`. Unknown keys and malformed values are errors naming the line.
void apply_config_text(ForecastConfig& config, std::string_view text, const std::string& origin = "config");
void apply_config_file(ForecastConfig& config, const std::filesystem::path& path);

/// Every field of the config, with derived values (eps_v, n_keep) resolved.
nlohmann::json config_to_json(const ForecastConfig& config);

/// Lowercase hex SHA-256 of a byte string / file contents.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Columns: t,target_t,truth,prediction,source,d_lambda,d_v,flags. Distances
/// are empty for records without a match.
void write_records_csv(const std::filesystem::path& path, const TimeSeries& series,
                       std::span<const ForecastRecord> records);

/// Error metrics plus flag counts; match statistics only in memory mode.
nlohmann::json run_summary(const ForecastConfig& config, const TimeSeries& series,
                           std::span<const ForecastRecord> records);

/// Per-step rows for plotting two runs issued over the same index set.
void write_comparison_csv(const std::filesystem::path& path, const TimeSeries& series,
                          std::span<const ForecastRecord> baseline, std::span<const ForecastRecord> candidate);

nlohmann::json comparison_summary(const ForecastConfig& baseline_config, const ForecastConfig& candidate_config,
                                  const TimeSeries& series, std::span<const ForecastRecord> baseline,
                                  std::span<const ForecastRecord> candidate);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace koopmem
