// Acceptance run: every experiment with its default configuration, checks
// grouped into the ten acceptance criteria.  One line per criterion; the
// exit status is nonzero if any criterion fails.

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "wue/harness/experiments.hpp"

using namespace wue::harness;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::string experiment;
  /// Check-name prefixes that belong to the criterion.
  std::vector<std::string> prefixes;
  /// Minimum number of matching checks (guards against renamed checks).
  std::size_t expected;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {1, "flat Weyl image: exact rationals, McCoy oracle, 20-symbol round trip", "flat-axioms",
       {"weyl-coefficients-exact", "weyl-image-monomials", "round-trip"}, 3},
      {2, "orderings: A = 1 is Weyl, standard preset, real-A hermiticity at K = 16, standard X p not hermitian",
       "orderings", {"weyl-identity", "standard-image", "real-orderings-hermitian", "standard-not-hermitian"}, 4},
      {3, "unit sphere: degree-one and degree-two images (Ricci 1/12), kinetic operator", "curved-defect",
       {"degree-one-image", "degree-two-derivative-terms", "ricci-coefficient", "kinetic-image"}, 4},
      {4, "trace-axiom defect: 2 hbar^2/3, constant in p, 1/a^2, flat zero, Emmrich nonzero", "curved-defect",
       {"defect-value", "defect-constant-in-p", "defect-radius-", "flat-no-defect", "emmrich-defect"}, 5},
      {5, "point transformation: polar vs Cartesian Delta, Delta(p_r) = -hbar/r", "point-transform",
       {"polar-vs-cartesian", "delta-p_r-at-r="}, 7},
      {6, "cylinder: unit trace for arbitrary cutoffs, reproduction m <= 4 at K = 32, cutoff independence",
       "cylinder-axioms", {"trace-normalization", "reproduction-m"}, 11},
      {7, "cylinder pair trace: quarter-turn suppression at K = 64, antipodal support, not a delta kernel",
       "cylinder-axioms", {"pair-"}, 3},
      {8, "discrete quantizer: strictly decreasing mollifier ladder, smeared orthogonality at K = 64", "",
       {"discrete-limit/ladder-decreasing-", "discrete-orthogonality/diagonal-signal",
        "discrete-orthogonality/off-diagonal-"}, 9},
      {9, "discrete quantization of f(p) is diagonal with entries f(k hbar)", "discrete-orthogonality",
       {"quantize-"}, 6},
      {10, "geometry: R = g on the unit sphere, volume jet -R/3, pullback vs covariant derivatives", "curved-defect",
       {"ricci-equals-metric", "volume-jet-order-two", "pullback-vs-covariant"}, 3},
  };
  return c;
}

bool starts_with(const std::string& s, const std::string& p) { return s.compare(0, p.size(), p) == 0; }

}  // namespace

int main() {
  std::map<std::string, Report> reports;
  std::map<std::string, std::string> errors;
  for (const auto& e : catalog()) {
    try {
      reports.emplace(e.name, run_experiment(parse_config(render_template(e.schema), e.name)));
    } catch (const std::exception& ex) {
      errors[e.name] = ex.what();
    }
  }

  int failed = 0;
  for (const auto& c : criteria()) {
    std::vector<const CheckRecord*> matched;
    std::vector<std::string> problems;
    for (const auto& [name, report] : reports)
      for (const auto& check : report.checks)
        for (const auto& p : c.prefixes) {
          const std::string key = c.experiment.empty() ? name + "/" + check.name : check.name;
          if ((c.experiment.empty() || c.experiment == name) && starts_with(key, p)) {
            matched.push_back(&check);
            break;
          }
        }
    for (const auto& [name, what] : errors)
      if (c.experiment.empty() || c.experiment == name) problems.push_back(name + ": " + what);
    for (const auto* m : matched)
      if (!m->passed) problems.push_back(m->name + ": " + m->detail);
    if (matched.size() < c.expected)
      problems.push_back("expected " + std::to_string(c.expected) + " checks, found " + std::to_string(matched.size()));
    const bool ok = problems.empty();
    failed += ok ? 0 : 1;
    std::printf("criterion %2d %s  %s (%zu checks)\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(), matched.size());
    for (const auto& p : problems) std::printf("      %s\n", p.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria().size()) - failed, criteria().size());
  return failed == 0 ? 0 : 1;
}
