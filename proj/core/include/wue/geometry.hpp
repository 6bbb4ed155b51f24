#pragma once

// Riemannian chart models and the local differential geometry needed by the
// quantization maps: Christoffel symbols, Ricci tensor, exponential map,
// normal-coordinate expansions, volume-density jets and covariant
// derivatives of scalar and tensor fields.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wue/fields.hpp"
#include "wue/finite_difference.hpp"
#include "wue/jet.hpp"
#include "wue/tensor.hpp"

namespace wue {

struct Coordinate {
  std::string name;
  /// Periodic coordinates are wrapped into [-period/2, period/2).
  std::optional<double> period;
  /// Values where the chart degenerates (e.g. the poles of a sphere).
  std::optional<double> lower_singularity;
  std::optional<double> upper_singularity;
};

/// A Riemannian manifold presented in a single chart.
class ManifoldModel {
 public:
  /// Metric components g_ab (row-major, n*n) as functions of the coordinates.
  using MetricFunction = std::function<std::vector<RJet>(std::span<const RJet> x)>;
  /// Closed-form exp_base(tangent) in (unwrapped) chart coordinates.
  using ExpFunction = std::function<std::vector<RJet>(std::span<const RJet> base, std::span<const RJet> tangent)>;
  using RadiusFunction = std::function<double(const Point&)>;

  struct Definition {
    std::string name;
    std::vector<Coordinate> coordinates;
    MetricFunction metric;
    ExpFunction exp;  // empty: geodesics are integrated numerically
    RadiusFunction injectivity_radius;
    bool flat = false;
    /// Minimal distance kept from chart singularities.
    double chart_margin = 0.1;
    int integrator_steps = 256;
  };

  explicit ManifoldModel(Definition def);

  const std::string& name() const noexcept { return def_.name; }
  int dim() const noexcept { return static_cast<int>(def_.coordinates.size()); }
  bool is_flat() const noexcept { return def_.flat; }
  bool has_analytic_exp() const noexcept { return static_cast<bool>(def_.exp); }
  const std::vector<Coordinate>& coordinates() const noexcept { return def_.coordinates; }
  double chart_margin() const noexcept { return def_.chart_margin; }
  int integrator_steps() const noexcept { return def_.integrator_steps; }

  /// Throws DomainError naming the offending coordinate.
  void check_chart(const Point& q) const;
  Point wrap(const Point& q) const;
  double injectivity_radius(const Point& q) const { return def_.injectivity_radius(q); }

  Eigen::MatrixXd metric(const Point& q) const;
  /// Metric components evaluated on arbitrary coordinate jets.
  std::vector<RJet> metric_at(std::span<const RJet> x) const { return def_.metric(x); }
  /// Metric components as jets in the displacement from q.
  std::vector<RJet> metric_jets(const Point& q, int order) const;
  std::vector<RJet> exp_at(std::span<const RJet> base, std::span<const RJet> tangent) const;

  /// Same model with the closed-form exponential map removed.
  ManifoldModel without_analytic_exp() const;
  ManifoldModel with_integrator_steps(int steps) const;

 private:
  Definition def_;
};

ManifoldModel euclidean(int n);
ManifoldModel circle();
/// Round sphere of radius a in colatitude/longitude coordinates (theta, phi).
ManifoldModel sphere(double radius);
/// Euclidean plane in polar coordinates (r, phi).
ManifoldModel polar_plane();
/// Parse "euclidean:n", "circle", "sphere:a" or "polar-plane".
ManifoldModel make_model(std::string_view spec);

// --- jet matrices ---------------------------------------------------------

/// Square matrix of jets, row-major.
using JetMatrix = std::vector<RJet>;

JetMatrix matmul(const JetMatrix& a, const JetMatrix& b, int n);
JetMatrix transpose(const JetMatrix& a, int n);
JetMatrix inverse(const JetMatrix& a, int n);
RJet determinant(const JetMatrix& a, int n);

// --- curvature ------------------------------------------------------------

/// Gamma^a_bc stored at [a][b][c], as jets of one order less than g.
Tensor<RJet> christoffel_from_metric(const JetMatrix& g, int n);
Tensor<RJet> christoffel_jets(const ManifoldModel& model, const Point& q, int order);
Tensor<double> christoffel(const ManifoldModel& model, const Point& q);

/// R_ab = d_c G^c_ab - d_b G^c_ac + G^c_cd G^d_ab - G^c_bd G^d_ac, from
/// Christoffel jets of order >= 1; the result has one order less.
Tensor<RJet> ricci_from_christoffel(const Tensor<RJet>& gamma);
Tensor<double> ricci(const ManifoldModel& model, const Point& q);
double scalar_curvature(const ManifoldModel& model, const Point& q);

// --- exponential map ------------------------------------------------------

/// exp_q(xi).  Throws DomainError when |xi|_g exceeds the injectivity bound
/// or q is too close to a chart singularity.  Periodic coordinates are wrapped.
Point exp_map(const ManifoldModel& model, const Point& q, const Point& xi);
/// RK4 integration of the geodesic equation (unwrapped coordinates).
Point geodesic_integrate(const ManifoldModel& model, const Point& q, const Point& xi, int steps);
/// Displacement exp_q(xi) - q as jets in xi.
std::vector<RJet> exp_jets(const ManifoldModel& model, const Point& q, int order);

/// Riemann normal coordinates around q.
struct NormalChart {
  int dim = 0;
  std::vector<RJet> displacement;  // x(xi) - q
  JetMatrix jacobian;              // dx^a / dxi^b
  JetMatrix metric;                // metric in normal coordinates
  RJet volume_ratio;               // sqrt(g(xi) / g(0)) in normal coordinates
};
NormalChart normal_chart(const ManifoldModel& model, const Point& q, int order);

// --- volume-density jets -------------------------------------------------

/// Symmetric derivative tensors of sqrt(g(xi)) / sqrt(g(q)) at xi = 0 in
/// normal coordinates, for k = 0..max_order.
struct JetTable {
  Point center;
  int max_order = 0;
  std::vector<Tensor<double>> coefficients;
};
JetTable sqrt_g_jet(const ManifoldModel& model, const Point& q, int max_order);

/// Which density ratio is differentiated when forming volume jets:
/// `direct` uses sqrt(g(xi))/sqrt(g(q)), `reciprocal` uses sqrt(g(q))/sqrt(g(xi)).
enum class VolumeJetConvention { reciprocal, direct };

/// The order-k volume jet as a covariant tensor field of the base point.
TensorField volume_jet_field(const ManifoldModel& model, int k, VolumeJetConvention convention);

// --- covariant calculus ---------------------------------------------------

/// nabla of a covariant local tensor; the new index comes first.
LocalTensor covariant_gradient(const LocalTensor& t, const Tensor<RJet>& gamma);
/// nabla_c T^{c a2 ...} of a contravariant local tensor.
LocalTensor divergence(const LocalTensor& t, const Tensor<RJet>& gamma);
TensorField divergence_field(const ManifoldModel& model, const TensorField& x);

/// nabla_(a1 ... nabla_ak) psi at q (symmetrized), k <= 4.
Tensor<Complex> sym_cov_deriv(const ManifoldModel& model, const ScalarField& psi, int k, const Point& q);

enum class JetMethod { taylor, finite_difference };
/// d^k/dxi^k psi(exp_q(xi)) at xi = 0.
Tensor<Complex> pullback_jet(const ManifoldModel& model, const ScalarField& psi, const Point& q, int k,
                             JetMethod method = JetMethod::taylor, const FiniteDifferenceOptions& fd = {});

TensorField metric_field(const ManifoldModel& model);
TensorField inverse_metric_field(const ManifoldModel& model);
TensorField ricci_field(const ManifoldModel& model);

}  // namespace wue
