#pragma once

// Check records, CSV series and the JSON report of one experiment run.

#include <filesystem>
#include <string>
#include <vector>

#include "wue/harness/config.hpp"

namespace wue::harness {

inline constexpr const char* kHarnessVersion = "0.1.0";

/// Where the reference value of a check comes from.
enum class Provenance {
  published_result,    // closed form stated in the source derivation
  independent_oracle,  // recomputed by a separate algorithm
  exact_identity,      // holds by construction (normalizations, symmetry)
};
std::string to_string(Provenance p);

/// How measured, reference and tolerance combine into pass/fail.
enum class Comparison {
  abs_error,   // |measured - reference| <= tolerance
  rel_error,   // |measured - reference| <= tolerance |reference|
  at_most,     // measured <= tolerance (reference is the ideal value, usually 0)
  exceeds,     // measured > reference; tolerance unused
  holds,       // boolean property: measured is 1 when it holds
};
std::string to_string(Comparison c);

struct CheckRecord {
  std::string name;
  std::string anchor;
  double measured = 0.0;
  double reference = 0.0;
  Provenance provenance = Provenance::independent_oracle;
  /// Short description of the reference (formula or oracle).
  std::string reference_source;
  double tolerance = 0.0;
  Comparison comparison = Comparison::abs_error;
  bool passed = false;
  std::string detail;
};

bool evaluate(Comparison c, double measured, double reference, double tolerance);

/// Plot-ready table written as <experiment>_<name>.csv.
struct Series {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string experiment;
  std::string anchor;
  std::string description;
  Json config;
  Json environment;
  std::vector<CheckRecord> checks;
  std::vector<Series> series;
  std::vector<std::string> warnings;

  bool passed() const;
  /// The timestamp is the only field that changes between identical runs.
  Json to_json(bool include_timestamp = true) const;
  std::vector<const CheckRecord*> failures() const;
};

std::string series_csv(const Series& s);
/// Flat CSV of the check records.
std::string checks_csv(const Report& r);

/// Writes <experiment>_report.json (format "json") or
/// <experiment>_checks.csv (format "csv"), plus every series as CSV.
/// Returns the written paths in order.
std::vector<std::filesystem::path> write_report(const Report& r, const std::filesystem::path& dir,
                                                const std::string& format);

/// Shortest round-trip representation; NaN and infinities as strings.
Json number_json(double v);

}  // namespace wue::harness
