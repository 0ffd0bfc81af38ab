#pragma once

// Config-driven experiment runner: one experiment per call, a JSON run record
// with a rounding-stable fingerprint, and optional CSV grids.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "univalent/config.hpp"
#include "univalent/error.hpp"

namespace univalent {

inline constexpr std::string_view kToolkitVersion = "1.0.0";

struct ExperimentInfo {
  std::string_view name;
  std::string_view description;
  std::string_view anchor;
};

/// The eight experiment kinds in a fixed order.
const std::vector<ExperimentInfo>& experiment_catalog();
bool is_experiment(std::string_view name);

struct GridFile {
  std::string name;  // file name inside the output directory
  std::string csv;   // "x,y,value" header and one row per cell
};

struct RunRecord {
  nlohmann::json report;
  std::vector<GridFile> grids;
  /// False when the experiment ran but a configured check missed its tolerance.
  bool passed = true;
  std::string failure_reason;
};

/// Runs one experiment. Config problems throw InvalidConfig; numerical and
/// precondition failures propagate as Error.
RunRecord run_experiment(std::string_view kind, const Config& config, std::uint64_t seed = 0);

/// FNV-1a over every number of the record printed with %.12f, in key order,
/// skipping wall_time_s and fingerprint.
std::string fingerprint(const nlohmann::json& report);

/// Reconstructs the effective config from a report's echo.
Config config_from_echo(const nlohmann::json& report);

/// 2, 3 or 4.
int exit_code(ErrorFamily family);

/// "error kind=<Kind> family=<family> reason=<message>" on one line.
std::string reason_line(const Error& error);

/// Record for a run that stopped with an error.
nlohmann::json failure_report(std::string_view kind, const Error& error);

/// Writes report.json and the grids into dir, creating it if needed.
void write_outputs(const RunRecord& record, const std::filesystem::path& dir);

}  // namespace univalent
