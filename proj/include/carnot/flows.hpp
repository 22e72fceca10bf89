#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carnot/quadrature.hpp"

namespace carnot {

/// Jacobian callback: writes the row-major n x n matrix d out_i / d x_j.
using MatrixFunction = std::function<void(const double*, double*)>;

/// Diffeomorphism known only numerically: forward, inverse and differential.
struct NumericMap {
  int n = 0;
  VectorFunction forward;
  VectorFunction inverse;
  MatrixFunction jacobian;
  std::string label = "map";

  std::vector<double> operator()(std::span<const double> x) const;
  std::vector<double> apply_inverse(std::span<const double> y) const;
  std::vector<double> differential(std::span<const double> x) const;
};

NumericMap identity_numeric(int n);
/// Requires the polynomial inverse.
NumericMap numeric_map(const PolyMap& F);
/// (f o g)(x) = f(g(x)).
NumericMap compose(const NumericMap& f, const NumericMap& g);

/// Central-difference Jacobian with step h, refined by one Richardson step (h, h/2).
/// `gap` receives the largest difference between the two levels.
std::vector<double> fd_jacobian(const VectorFunction& f, int n, const double* x, double h = 1e-5,
                                double* gap = nullptr);

/// Autonomous ODE x' = Z(x) with optional exact DZ for variational equations.
struct FlowSpec {
  int n = 0;
  VectorFunction field;
  std::optional<MatrixFunction> field_jacobian;
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Optional domain; leaving it raises DomainError.
  std::optional<std::pair<std::vector<double>, std::vector<double>>> box;
  std::string label = "field";
};

FlowSpec flow_spec(const PolyVectorField& Z, const std::string& label = "field");
/// Spec for a field given by frame coefficients sum_a z_a X_a.
FlowSpec flow_spec(const CarnotGroup& G, const std::vector<PolyD>& z, const std::string& label = "field");

/// phi^Z_t(x) by adaptive Dormand-Prince 5(4) with dense output.
std::vector<double> flow(const FlowSpec& Z, std::span<const double> x, double t);
/// phi^Z_t(x) together with its Jacobian (row-major) from the variational equation.
std::pair<std::vector<double>, std::vector<double>> flow_with_jacobian(const FlowSpec& Z, std::span<const double> x,
                                                                       double t);
/// The time-t flow as a map: inverse is the time -t flow; the differential comes from
/// the variational equation when DZ is known, else from fd_jacobian.
NumericMap flow_map(const FlowSpec& Z, double t);

/// (f_* Z)(y) = Df(f^-1 y) Z(f^-1 y), pointwise.
VectorFunction pushforward_field(const NumericMap& f, const VectorFunction& Z);
FlowSpec pushforward_spec(const NumericMap& f, const FlowSpec& Z);

/// Largest layer >= 2 frame component of Df(x) X_(1,j)(x), read at f(x), relative to
/// the largest component; zero for contact maps.
double horizontality_defect(const CarnotGroup& G, const NumericMap& f, std::span<const double> x);

/// (t_1..t_n) -> phi^{X_1}_{t_1} o ... o phi^{X_n}_{t_n}(p).
class FlowChart {
 public:
  FlowChart(std::vector<FlowSpec> fields, std::vector<double> p);

  int dim() const { return int(p_.size()); }
  const std::vector<double>& base() const { return p_; }
  std::vector<double> forward(std::span<const double> t) const;
  /// Damped Newton on forward with finite-difference Jacobians; DomainError on divergence.
  std::vector<double> inverse(std::span<const double> q, double tol = 1e-12) const;
  /// Half the radius at which the Jacobian's condition number first exceeds 1e3.
  double valid_radius() const;
  /// Jacobian of forward at t (forward differences).
  std::vector<double> jacobian(std::span<const double> t) const;

 private:
  std::vector<FlowSpec> fields_;
  std::vector<double> p_;
  std::vector<double> j0_;
};

/// Max-norm coordinate distance between phi^{f_*Z}_t(f(x)) and f(phi^Z_t(x)). The gauge
/// distance would turn round-off in layer l into its l-th root.
double verify_conjugacy(const CarnotGroup& G, const NumericMap& f, const FlowSpec& Z, std::span<const double> x,
                        double t);

struct ChartReport {
  double max_error = 0.0;
  std::size_t points = 0;
  double radius = 0.0;
  double valid_radius = 0.0;
};

/// sup over a per_axis^n grid of [-radius, radius]^n of |psi^-1(f(phi(t))) - t|, with phi the
/// chart at p from X and psi the chart at f(p) from f_* X.
ChartReport verify_identity_in_chart(const NumericMap& f, std::span<const double> p, const std::vector<FlowSpec>& X,
                                     double radius = 0.1, int per_axis = 5);

}  // namespace carnot
