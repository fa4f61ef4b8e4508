#pragma once

// Running experiment configs: summary JSON, CSV tables and the SVG chart.

#include "anosov/boundary.hpp"
#include "anosov/config.hpp"
#include "anosov/geometry.hpp"
#include "anosov/spectra.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace anosov {

inline constexpr int kSummarySchemaVersion = 1;

const char* tool_version();

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitNegative = 2 };

struct RunOverrides {
  std::optional<int> radius;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(ExperimentConfig& config, const RunOverrides& overrides);

struct RunResult {
  int exit_code = kExitOk;
  Json summary;
  /// Files written, relative to the output directory.
  std::vector<std::string> artifacts;
};

/// Runs the experiment and writes its artifacts into config.out_dir.
RunResult run_experiment(const ExperimentConfig& config);

struct ExampleEntry {
  std::string name;
  std::string description;
  std::filesystem::path path;
};

/// Directory holding the shipped configs (ANOSOV_LAB_CONFIG_DIR overrides).
std::filesystem::path example_dir();
std::vector<ExampleEntry> example_catalog();

/// %.17g, with "" for NaN and "inf"/"-inf" for infinities.
std::string format_number(double x);

/// word,length,mu_1..mu_d,lambda_1..lambda_d,ratio_m (log values).
void write_spectra_csv(std::ostream& os, const Ball& ball, int m);

/// word,length,xi1_1..xi1_d followed by the flattened frames of
/// ξ^(m)(γ⁺), ξ^(d-m)(γ⁻) and ξ^(d-1)(γ⁻) (column-major).
void write_cloud_csv(std::ostream& os, const LimitCloud& cloud);

/// Scatter of chart coordinates for a d = 3 cloud with the tangent line at
/// the anchor. Viewport covers the 5th to 95th percentile of the points.
std::string chart_svg(const std::vector<ChartPoint>& points, const std::string& title);

}  // namespace anosov
