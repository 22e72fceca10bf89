#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "carnot/exterior.hpp"

namespace carnot {

/// One-dimensional quadrature rule.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
  /// Affine image of the rule on [-1, 1] onto [a, b].
  Rule1D mapped(double a, double b) const;
};

/// Gauss-Legendre rule of the given order on [-1, 1]; exact through degree 2*order - 1.
Rule1D gauss_legendre(int order);
/// `panels` equal Gauss-Legendre panels on [a, b].
Rule1D composite_gauss(int order, int panels, double a, double b);

/// The one-dimensional profile exp(-1/(1-u^2)) on (-1, 1), zero elsewhere.
double bump_profile(double u);

/// Gauss rule for the weight bump_profile(u) du on [-1, 1], normalized so the weights
/// sum to 1. Exact through degree 2*order - 1 against the weight.
Rule1D bump_weighted_rule(int order);

/// Normalized moments m_k = int u^k b(u) du / int b(u) du; the table covers k <= 160
/// (odd entries vanish) and kmax only bounds-checks the request.
const std::vector<double>& bump_moments(int kmax);
/// int_{-1}^{1} b(u) du.
double bump_mass();

/// Tensor-product quadrature over a coordinate box.
class QuadratureGrid {
 public:
  QuadratureGrid() = default;
  /// Gauss-Legendre of the given per-axis order on prod [lo_i, hi_i].
  QuadratureGrid(std::vector<double> lo, std::vector<double> hi, int order);
  QuadratureGrid(std::vector<double> lo, std::vector<double> hi, std::vector<int> orders);
  /// Arbitrary per-axis rules (already mapped to their intervals).
  explicit QuadratureGrid(std::vector<Rule1D> axes);

  int dim() const { return int(axes_.size()); }
  std::size_t size() const { return size_; }
  const Rule1D& axis(int i) const { return axes_[i]; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  /// Per-axis polynomial degree integrated exactly by Gauss-Legendre axes.
  int exactness_degree(int axis) const { return 2 * int(axes_[axis].size()) - 1; }

  /// Coordinates of node `idx` (last axis fastest).
  void point(std::size_t idx, double* x) const;
  double weight(std::size_t idx) const;

 private:
  void init();
  std::vector<Rule1D> axes_;
  std::vector<double> lo_, hi_;
  std::size_t size_ = 0;
};

using PolyD = Polynomial<double>;

/// Polynomial test bump phi(x) = prod_i (1 - ((x_i - c_i)/r_i)^2)^m on the box
/// |x_i - c_i| <= r_i and zero outside; C^(m-1) across the box boundary.
struct PolyBump {
  std::vector<double> center;
  std::vector<double> radius;
  int power = 4;

  int dim() const { return int(center.size()); }
  double operator()(const double* x) const;
  /// d phi / d x_i.
  double partial(int i, const double* x) const;
  std::vector<double> lo() const;
  std::vector<double> hi() const;
  /// int x^k phi_i(x) dx and int x^k phi_i'(x) dx along axis i (Gauss, exact).
  double axis_moment(int i, int k) const;
  double axis_derivative_moment(int i, int k) const;
  /// Gauss-Legendre grid on the support box.
  QuadratureGrid grid(int order) const;
  QuadratureGrid grid(const std::vector<int>& orders) const;
};

/// int p phi dx from one-dimensional moments (exact up to rounding).
double integrate_against(const PolyD& p, const PolyBump& phi);
/// int p d_i phi dx.
double integrate_against_partial(const PolyD& p, const PolyBump& phi, int i);

/// Default per-axis order: CARNOT_GRID_ORDER if set, else 8.
int default_grid_order();

using ScalarFunction = std::function<double(const double*)>;
/// Writes dim() components at x into out.
using VectorFunction = std::function<void(const double*, double*)>;

/// Form sampled at the nodes of a grid, stored against the left-invariant coframe:
/// coeffs[k][node] is the coefficient of sigma_k (k a FormKey of the given degree).
struct SampledForm {
  int n = 0;
  int degree = 0;
  QuadratureGrid grid;
  std::map<FormKey, std::vector<double>> coeffs;

  double sup_norm() const;
};

/// Vector field sampled at grid nodes; comps[a][node] is the coefficient of X_a.
struct SampledVectorField {
  QuadratureGrid grid;
  std::vector<std::vector<double>> comps;

  double sup_norm() const;
};

/// Samples a polynomial form (dx basis) after conversion to the coframe basis.
SampledForm sample_form(const CarnotGroup& G, const PolyForm& w, const QuadratureGrid& grid);
/// Samples a field given by its coordinate components (numeric, e.g. a pushforward).
SampledVectorField sample_field(const CarnotGroup& G, const VectorFunction& Z, const QuadratureGrid& grid);
SampledVectorField sample_field(const CarnotGroup& G, const PolyVectorField& Z, const QuadratureGrid& grid);

/// Pointwise algebra on sampled objects sharing a grid.
SampledForm wedge(const SampledForm& a, const SampledForm& b);
SampledForm interior_product(const SampledVectorField& X, const SampledForm& w);

/// eta(X_(1,j)) = 0 at every node for every layer-1 j, relative to sup|eta|.
bool is_vertical(const CarnotGroup& G, const SampledForm& eta, double rel_tol = 1e-10);
/// Essential-sup weight over the nodes: mixed if some node carries two weights,
/// otherwise the largest nodal weight. Values below rel_tol * sup count as zero.
Weight weight_of(const CarnotGroup& G, const SampledForm& w, double rel_tol = 1e-10);

}  // namespace carnot
