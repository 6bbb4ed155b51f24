#include "wue/harness/experiments.hpp"

#include <cmath>
#include <sstream>

#include "experiment_defs.hpp"
#include "wue/error.hpp"

namespace wue::harness {

namespace detail {

ConfigSchema make_schema(std::string_view experiment, Json extra, std::map<std::string, std::string> comments) {
  ConfigSchema s = common_schema(experiment);
  for (auto it = extra.begin(); it != extra.end(); ++it) s.defaults[it.key()] = it.value();
  s.comments.merge(comments);
  return s;
}

QuantizationContext context_of(const ExperimentConfig& cfg) {
  QuantizationContext ctx;
  ctx.hbar = cfg.hbar();
  if (cfg.values().contains("tolerances") && cfg.values()["tolerances"].contains("quadrature"))
    ctx.quadrature_tolerance = cfg.tolerance("quadrature");
  return ctx;
}

Point make_point(const std::vector<double>& v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<Eigen::Index>(i)] = v[i];
  return p;
}

MomentumPolynomial random_symbol(const ManifoldModel& model, int max_degree, std::mt19937_64& rng) {
  // U and V stand for the two chart coordinates.
  static const char* pool[] = {"U", "V", "U*V", "sin(U)", "cos(V)", "exp(U/2)", "1 + U^2", "sin(U + V)", "V^2 - U", "1"};
  const std::string& u = model.coordinates()[0].name;
  const std::string& v = model.coordinates()[1].name;
  std::uniform_int_distribution<int> pick(0, static_cast<int>(std::size(pool)) - 1), weight(-3, 3), coin(0, 3);
  MomentumPolynomial f(model.dim());
  for (int m = 0; m <= max_degree; ++m) {
    if (m != max_degree && coin(rng) == 0) continue;
    std::vector<std::string> comps;
    for (int i = 0; i < (1 << m); ++i) {
      std::string out;
      for (const char* c = pool[pick(rng)]; *c; ++c) out += *c == 'U' ? u : *c == 'V' ? v : std::string(1, *c);
      comps.push_back(std::to_string(weight(rng)) + "*(" + out + ")");
    }
    f.add(m, expression_tensor_field(model, comps, m));
  }
  return f;
}

}  // namespace detail

const std::vector<ExperimentInfo>& catalog() {
  static const std::vector<ExperimentInfo> c = {
      detail::flat_axioms(),     detail::orderings(),      detail::curved_defect(),         detail::point_transform(),
      detail::cylinder_axioms(), detail::discrete_limit(), detail::discrete_orthogonality(),
  };
  return c;
}

const ExperimentInfo& find_experiment(std::string_view name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  std::ostringstream os;
  os << "unknown experiment '" << name << "'; valid names:";
  for (const auto& e : catalog()) os << " " << e.name;
  throw ConfigError(os.str());
}

CheckRecord& RunContext::record(std::string name, std::string anchor, double measured, double reference,
                                Provenance provenance, std::string reference_source, double tolerance,
                                Comparison comparison) {
  CheckRecord r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.measured = measured;
  r.reference = reference;
  r.provenance = provenance;
  r.reference_source = std::move(reference_source);
  const bool bounded =
      comparison == Comparison::abs_error || comparison == Comparison::rel_error || comparison == Comparison::at_most;
  r.tolerance = bounded ? tolerance * scale_ : tolerance;
  r.comparison = comparison;
  r.passed = evaluate(comparison, r.measured, r.reference, r.tolerance);
  if (!r.passed) {
    std::ostringstream os;
    os.precision(17);
    os << "failed [" << r.anchor << "]: measured " << r.measured << " vs reference " << r.reference << " ("
       << to_string(comparison) << ", tolerance " << r.tolerance << ")";
    r.detail = os.str();
  }
  report_.checks.push_back(std::move(r));
  return report_.checks.back();
}

Report run_experiment(const ExperimentConfig& config, double tolerance_scale) {
  if (!(tolerance_scale > 0.0) || !std::isfinite(tolerance_scale))
    throw ConfigError("tolerance scale must be a positive number");
  const ExperimentInfo& info = find_experiment(config.experiment());
  Report report;
  report.experiment = info.name;
  report.anchor = info.anchor;
  report.description = info.description;
  report.config = config.values();
  report.environment["version"] = kHarnessVersion;
  report.environment["hbar"] = config.hbar();
  report.environment["seed"] = config.seed();
  report.environment["tolerance_scale"] = tolerance_scale;
  report.environment["truncations"] = Json::object();
  RunContext ctx(report, tolerance_scale);
  try {
    info.run(config, ctx);
  } catch (const CheckError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(info.name + ": " + e.what());
  } catch (const std::exception& e) {
    // Failures outside a named check happen while setting up the inputs.
    throw CheckError(info.name + "/setup", e.what());
  }
  return report;
}

}  // namespace wue::harness
