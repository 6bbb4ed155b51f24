#pragma once

// Internal: constructors of the catalog entries and helpers shared by them.

#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "wue/harness/experiments.hpp"
#include "wue/symbols.hpp"

namespace wue::harness::detail {

inline constexpr double kPi = std::numbers::pi;

ExperimentInfo flat_axioms();
ExperimentInfo orderings();
ExperimentInfo curved_defect();
ExperimentInfo point_transform();
ExperimentInfo cylinder_axioms();
ExperimentInfo discrete_limit();
ExperimentInfo discrete_orthogonality();

/// Common keys plus `extra` (object) and its comments.
ConfigSchema make_schema(std::string_view experiment, Json extra, std::map<std::string, std::string> comments);

QuantizationContext context_of(const ExperimentConfig& cfg);

Point make_point(const std::vector<double>& v);

/// Random momentum polynomial in dimension 2 whose components are drawn
/// from a fixed pool of expressions in (x, y) with small integer weights.
MomentumPolynomial random_symbol(const ManifoldModel& model, int max_degree, std::mt19937_64& rng);

}  // namespace wue::harness::detail
