#pragma once

// Experiment configuration: a JSON document checked against the defaults of
// the chosen experiment.  Keys absent from the document take the default;
// keys unknown to the experiment are rejected.

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace wue::harness {

using Json = nlohmann::ordered_json;

/// Default values of one experiment plus a comment per dotted key, used for
/// validation and for the template printed by `show-config`.
struct ConfigSchema {
  Json defaults;
  std::map<std::string, std::string> comments;
};

class ExperimentConfig {
 public:
  ExperimentConfig(std::string experiment, Json values) : experiment_(std::move(experiment)), values_(std::move(values)) {}

  const std::string& experiment() const noexcept { return experiment_; }
  /// Fully merged document (defaults overridden by the file).
  const Json& values() const noexcept { return values_; }

  const Json& at(std::string_view dotted) const;
  double number(std::string_view dotted) const { return at(dotted).get<double>(); }
  int integer(std::string_view dotted) const { return at(dotted).get<int>(); }
  std::string string(std::string_view dotted) const { return at(dotted).get<std::string>(); }
  std::vector<double> numbers(std::string_view dotted) const { return at(dotted).get<std::vector<double>>(); }
  std::vector<int> integers(std::string_view dotted) const { return at(dotted).get<std::vector<int>>(); }

  double hbar() const { return number("hbar"); }
  std::uint64_t seed() const { return at("seed").get<std::uint64_t>(); }
  double tolerance(std::string_view name) const;

  /// Overrides a value after validation (used by the CLI for --out/--format).
  void set(std::string_view dotted, Json value);

 private:
  std::string experiment_;
  Json values_;
};

/// Keys shared by every experiment: experiment, hbar, seed, output.*.
ConfigSchema common_schema(std::string_view experiment);

/// Parses `text` (comments allowed), looks up the experiment schema and
/// validates.  Errors name the line and column or the offending key.
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Checks `doc` against `schema` and returns the merged document.
Json validate_against(const Json& doc, const ConfigSchema& schema, std::string_view origin);

/// Commented JSON template; parse_config accepts it unchanged.
std::string render_template(const ConfigSchema& schema);

}  // namespace wue::harness
