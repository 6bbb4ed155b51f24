#include <doctest.h>

#include <set>

#include "wue/error.hpp"
#include "wue/harness/experiments.hpp"

using namespace wue;
using namespace wue::harness;

TEST_CASE("catalog lists seven experiments in a stable order") {
  const auto& c = catalog();
  REQUIRE(c.size() == 7);
  const char* names[] = {"flat-axioms",     "orderings",      "curved-defect",         "point-transform",
                         "cylinder-axioms", "discrete-limit", "discrete-orthogonality"};
  std::set<std::string> anchors;
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(c[i].name == names[i]);
    CHECK_FALSE(c[i].anchor.empty());
    CHECK_FALSE(c[i].description.empty());
    anchors.insert(c[i].anchor);
  }
  CHECK(anchors.size() == 7);
  try {
    find_experiment("nope");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    for (const char* n : names) CHECK(what.find(n) != std::string::npos);
  }
}

TEST_CASE("templates are valid configurations") {
  for (const auto& e : catalog()) {
    const std::string text = render_template(e.schema);
    CHECK(text.find("//") != std::string::npos);
    const auto cfg = parse_config(text, e.name);
    CHECK(cfg.experiment() == e.name);
    CHECK(cfg.hbar() == 1.0);
    CHECK(cfg.values() == e.schema.defaults);
  }
}

TEST_CASE("configuration errors name the key or the line") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"experiment": "orderings", "bogus": 1})").find("unknown key 'bogus'") != std::string::npos);
  CHECK(message(R"({"experiment": "orderings", "circle": {"truncaton": 8}})").find("'circle.truncaton'") !=
        std::string::npos);
  CHECK(message("{\n  \"experiment\": \"orderings\",\n  \"hbar\": ]\n}").find("cfg.json:3:") != std::string::npos);
  CHECK(message(R"({"experiment": "orderings", "tolerances": {"hermiticity": 0}})").find("must be positive") !=
        std::string::npos);
  CHECK(message(R"({"experiment": "orderings", "hbar": -1})").find("'hbar'") != std::string::npos);
  CHECK(message(R"({"experiment": "orderings", "circle": {"truncation": 1.5}})").find("integer") != std::string::npos);
  CHECK(message(R"({"hbar": 1})").find("'experiment'") != std::string::npos);
  CHECK(message(R"({"experiment": "nope"})").find("valid names") != std::string::npos);
  // Floats accept integers; array elements are checked against the default element.
  CHECK(message(R"({"experiment": "point-transform", "hbar": 2, "radial_momentum": {"radii": [1, 2]}})").empty());
  CHECK(message(R"({"experiment": "point-transform", "radial_momentum": {"radii": ["x"]}})")
            .find("radial_momentum.radii[0]") != std::string::npos);
}

TEST_CASE("reports are deterministic and echo hbar") {
  auto cfg = parse_config(R"({"experiment": "point-transform", "hbar": 0.5, "sampling": {"count": 4}})");
  const Report a = run_experiment(cfg), b = run_experiment(cfg);
  CHECK(a.to_json(false).dump() == b.to_json(false).dump());
  CHECK(a.to_json(false)["environment"]["hbar"] == 0.5);
  CHECK(a.to_json(true)["environment"].contains("timestamp"));
  CHECK(a.passed());
  for (const auto& s : a.series) CHECK(series_csv(s) == series_csv(b.series[&s - a.series.data()]));
  // The worked value scales with hbar.
  bool found = false;
  for (const auto& c : a.checks)
    if (c.name == "delta-p_r-at-r=1.00") {
      CHECK(c.reference == doctest::Approx(-0.5));
      found = true;
    }
  CHECK(found);
}

TEST_CASE("failed checks carry the anchor and the measured/reference pair") {
  auto cfg = parse_config(R"({"experiment": "orderings", "nonhermitian": {"coefficient": "constant"},
                              "symbols": {"count": 1}, "circle": {"truncation": 4, "max_degree": 1}})");
  const Report r = run_experiment(cfg);
  CHECK_FALSE(r.passed());
  const auto failed = r.failures();
  REQUIRE(failed.size() == 1);
  CHECK(failed[0]->name == "standard-not-hermitian");
  CHECK(failed[0]->detail.find(failed[0]->anchor) != std::string::npos);
  CHECK(failed[0]->detail.find("measured") != std::string::npos);
  CHECK(failed[0]->detail.find("reference") != std::string::npos);
  CHECK_FALSE(r.to_json()["passed"].get<bool>());
}

TEST_CASE("tolerance scale applies to bounded comparisons only") {
  auto cfg = parse_config(R"({"experiment": "point-transform", "sampling": {"count": 2}})");
  const Report r = run_experiment(cfg, 1e-3);
  for (const auto& c : r.checks) {
    if (c.comparison == Comparison::abs_error || c.comparison == Comparison::at_most) {
      CHECK(c.tolerance < 1e-8);
    }
  }
  CHECK_THROWS_AS(run_experiment(cfg, 0.0), ConfigError);
  CHECK(evaluate(Comparison::exceeds, 2.0, 1.0, 0.0));
  CHECK_FALSE(evaluate(Comparison::exceeds, 1.0, 1.0, 0.0));
  CHECK(evaluate(Comparison::rel_error, 1.01, 1.0, 0.02));
  CHECK_FALSE(evaluate(Comparison::at_most, NAN, 0.0, 1.0));
}

TEST_CASE("library errors surface with the check named") {
  auto cfg = parse_config(R"({"experiment": "cylinder-axioms", "matrix": {"truncation": 65},
                              "trace": {"random_cutoffs": 0, "truncation": 64}})");
  try {
    run_experiment(cfg);
    FAIL("expected CheckError");
  } catch (const CheckError& e) {
    CHECK(e.check() == "matrix-hermitian");
  }
}
