#include "wue/harness/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "wue/error.hpp"

namespace wue::harness {

namespace {

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::published_result: return "published-result";
    case Provenance::independent_oracle: return "independent-oracle";
    case Provenance::exact_identity: return "exact-identity";
  }
  return "?";
}

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::abs_error: return "abs-error";
    case Comparison::rel_error: return "rel-error";
    case Comparison::at_most: return "at-most";
    case Comparison::exceeds: return "exceeds";
    case Comparison::holds: return "holds";
  }
  return "?";
}

bool evaluate(Comparison c, double measured, double reference, double tolerance) {
  if (std::isnan(measured)) return false;
  switch (c) {
    case Comparison::abs_error: return std::abs(measured - reference) <= tolerance;
    case Comparison::rel_error: return std::abs(measured - reference) <= tolerance * std::abs(reference);
    case Comparison::at_most: return measured <= tolerance;
    case Comparison::exceeds: return measured > reference;
    case Comparison::holds: return measured == 1.0;
  }
  return false;
}

Json number_json(double v) {
  if (!std::isfinite(v)) return shortest(v);
  return v;
}

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::vector<const CheckRecord*> Report::failures() const {
  std::vector<const CheckRecord*> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(&c);
  return out;
}

Json Report::to_json(bool include_timestamp) const {
  Json j;
  j["experiment"] = experiment;
  j["anchor"] = anchor;
  j["description"] = description;
  j["config"] = config;
  j["environment"] = environment;
  if (include_timestamp) j["environment"]["timestamp"] = utc_timestamp();
  j["checks"] = Json::array();
  for (const auto& c : checks) {
    Json r;
    r["name"] = c.name;
    r["anchor"] = c.anchor;
    r["measured"] = number_json(c.measured);
    r["reference"] = number_json(c.reference);
    r["provenance"] = to_string(c.provenance);
    r["reference_source"] = c.reference_source;
    r["tolerance"] = number_json(c.tolerance);
    r["comparison"] = to_string(c.comparison);
    r["pass"] = c.passed;
    if (!c.detail.empty()) r["detail"] = c.detail;
    j["checks"].push_back(std::move(r));
  }
  j["series"] = Json::array();
  for (const auto& s : series) {
    Json r;
    r["name"] = s.name;
    r["columns"] = s.columns;
    r["rows"] = s.rows.size();
    j["series"].push_back(std::move(r));
  }
  j["warnings"] = warnings;
  j["passed"] = passed();
  return j;
}

std::string series_csv(const Series& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.columns.size(); ++i) os << (i ? "," : "") << csv_field(s.columns[i]);
  os << "\n";
  for (const auto& row : s.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << shortest(row[i]);
    os << "\n";
  }
  return os.str();
}

std::string checks_csv(const Report& r) {
  std::ostringstream os;
  os << "name,anchor,measured,reference,provenance,reference_source,tolerance,comparison,pass\n";
  for (const auto& c : r.checks)
    os << csv_field(c.name) << ',' << csv_field(c.anchor) << ',' << shortest(c.measured) << ','
       << shortest(c.reference) << ',' << to_string(c.provenance) << ',' << csv_field(c.reference_source) << ','
       << shortest(c.tolerance) << ',' << to_string(c.comparison) << ',' << (c.passed ? "true" : "false") << "\n";
  return os.str();
}

std::vector<std::filesystem::path> write_report(const Report& r, const std::filesystem::path& dir,
                                                const std::string& format) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  if (format == "json") {
    out.push_back(dir / (r.experiment + "_report.json"));
    write_file(out.back(), r.to_json().dump(2) + "\n");
  } else if (format == "csv") {
    out.push_back(dir / (r.experiment + "_checks.csv"));
    write_file(out.back(), checks_csv(r));
  } else {
    throw ConfigError("unknown output format '" + format + "' (expected json or csv)");
  }
  for (const auto& s : r.series) {
    out.push_back(dir / (r.experiment + "_" + s.name + ".csv"));
    write_file(out.back(), series_csv(s));
  }
  return out;
}

}  // namespace wue::harness
