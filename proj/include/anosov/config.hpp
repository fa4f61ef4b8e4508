#pragma once

// Experiment configs: JSON documents describing a representation recipe, a
// ball radius, an experiment kind with its parameters, a seed and an output
// directory.

#include "anosov/functors.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace anosov {

using Json = nlohmann::json;

/// Schema or syntax violation, located by JSON pointer and source line.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, int line, const std::string& message);

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {"certify", "alpha",   "limitset",
                                                 "hyperconvex", "hoelder", "cones",
                                                 "gelfand", "perturb-sweep"};
  return kinds;
}

struct ExperimentConfig {
  std::string name;
  std::string description;
  Recipe recipe;
  int radius = 5;
  std::optional<std::uint64_t> seed;
  std::string kind;
  /// Kind-specific parameters with defaults filled in.
  Json params;
  std::string out_dir;
};

/// Parses and validates a config. `source` names the document in messages.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

/// The config as canonical JSON (defaults filled in, overrides applied).
Json config_to_json(const ExperimentConfig& config);

Recipe recipe_from_json(const Json& j);
Json recipe_to_json(const Recipe& recipe);

/// 64-bit FNV-1a of the canonical JSON dump without the output section, as
/// 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace anosov
