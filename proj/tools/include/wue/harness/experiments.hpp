#pragma once

// The experiment catalog and the runner.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wue/harness/config.hpp"
#include "wue/harness/report.hpp"

namespace wue::harness {

class RunContext;

struct ExperimentInfo {
  std::string name;
  /// Which statement of the theory the experiment verifies.
  std::string anchor;
  std::string description;
  ConfigSchema schema;
  std::function<void(const ExperimentConfig&, RunContext&)> run;
};

/// Stable order: flat-axioms, orderings, curved-defect, point-transform,
/// cylinder-axioms, discrete-limit, discrete-orthogonality.
const std::vector<ExperimentInfo>& catalog();

/// Throws ConfigError listing the valid names.
const ExperimentInfo& find_experiment(std::string_view name);

/// Error raised by a library call inside a named check.
class CheckError : public std::runtime_error {
 public:
  CheckError(const std::string& check, const std::string& what)
      : std::runtime_error("check '" + check + "': " + what), check_(check) {}
  const std::string& check() const noexcept { return check_; }

 private:
  std::string check_;
};

/// Collects records while an experiment runs.  Tolerances of bounded
/// comparisons are multiplied by `tolerance_scale`.
class RunContext {
 public:
  RunContext(Report& report, double tolerance_scale) : report_(report), scale_(tolerance_scale) {}

  CheckRecord& record(std::string name, std::string anchor, double measured, double reference, Provenance provenance,
                      std::string reference_source, double tolerance, Comparison comparison);
  void add_series(Series s) { report_.series.push_back(std::move(s)); }
  void warn(std::string w) { report_.warnings.push_back(std::move(w)); }
  void note_truncation(const std::string& key, const Json& value) { report_.environment["truncations"][key] = value; }

  /// Runs `body`, converting any exception into a CheckError naming `check`.
  template <class F>
  auto guarded(const std::string& check, F&& body) -> decltype(body()) {
    try {
      return body();
    } catch (const CheckError&) {
      throw;
    } catch (const std::exception& e) {
      throw CheckError(check, e.what());
    }
  }

  double tolerance_scale() const noexcept { return scale_; }

 private:
  Report& report_;
  double scale_;
};

/// Runs the experiment of `config`.  Library errors propagate as CheckError.
Report run_experiment(const ExperimentConfig& config, double tolerance_scale = 1.0);

}  // namespace wue::harness
