#pragma once

#include <optional>
#include <vector>

#include "carnot/kernels.hpp"
#include "carnot/quadrature.hpp"

namespace carnot {

using FormD = Form<PolyD>;

/// rho_eps(x) = eps^-nu rho(delta_(1/eps) x) with the product profile
/// rho(y) = C prod_i b(y_i / a^(w_i)), b(u) = exp(-1/(1-u^2)), a = n^(-1/(2 s!)).
/// The support box prod [-a^w_i, a^w_i] lies inside the unit gauge ball, and rho is even.
class Mollifier {
 public:
  Mollifier(const CarnotGroup& G, double eps = 1.0, int order = default_grid_order());

  const CarnotGroup& group() const { return *G_; }
  double eps() const { return eps_; }
  int order() const { return order_; }
  /// a in the half-widths (eps a)^(w_i).
  double base_scale() const { return a_; }
  double half_width(int i) const { return half_[i]; }
  /// C in the formula above (so that int rho = 1).
  double normalization() const { return C_; }
  Mollifier rescaled(double eps) const { return Mollifier(*G_, eps, order_); }

  double operator()(const double* x) const;
  /// rho_eps(0), the maximum.
  double peak() const;

  /// Product rule for rho_eps(y) dy: nodes in the support box, weights summing to 1.
  /// Exact through degree 2*order-1 in each coordinate.
  const QuadratureGrid& rule() const { return rule_; }
  /// Same rule at a different order.
  QuadratureGrid rule(int order) const;
  /// int rho_eps(y) y^m dy.
  double moment(const Monomial& m) const;

  std::vector<double> support_lo() const;
  std::vector<double> support_hi() const;

 private:
  const CarnotGroup* G_;
  double eps_;
  int order_;
  double a_;
  double C_;
  std::vector<double> half_;
  QuadratureGrid rule_;
};

/// int rho_eps by a composite Gauss rule over the support box with rho evaluated
/// pointwise (no use of the product structure).
double direct_integral(const Mollifier& M, int order, int panels, bool parallel = true);

/// The ways of writing rho_eps * f(x): int rho(x y^-1) f(y) dy, int rho(y^-1) f(yx) dy
/// and int rho(y) f(y^-1 x) dy.
enum class ConvolutionForm { Defining, Inverted, Translated };

/// Quadrature value of rho_eps * f at x. Translated uses the product rule; the
/// other two evaluate rho pointwise on a composite Gauss grid (`panels` per axis).
/// With `domain` given, throws DomainError when the integration region leaves it.
double convolve(const Mollifier& M, const ScalarFunction& f, const double* x,
                ConvolutionForm form = ConvolutionForm::Translated, int panels = 4,
                const std::optional<std::pair<std::vector<double>, std::vector<double>>>& domain = std::nullopt);

/// rho_eps * f for polynomial f, expanded with the moments of rho_eps.
PolyD convolve(const Mollifier& M, const Poly& f);
PolyD convolve(const Mollifier& M, const PolyD& f);

/// Box of points x with y^-1 x in [lo, hi] for every y in the support of rho_eps
/// (conservative). Throws PreconditionError when empty.
std::pair<std::vector<double>, std::vector<double>> shrunk_box(const Mollifier& M, const std::vector<double>& lo,
                                                               const std::vector<double>& hi);

/// theta^eps = sum_I (rho_eps * theta_I) sigma_I; result against the coframe.
FormD smooth_form(const Mollifier& M, const PolyForm& theta);
/// X^eps = sum_a (rho_eps * z_a) X_a; result as frame coefficients.
std::vector<PolyD> smooth_field(const Mollifier& M, const PolyVectorField& X);
/// Coordinate components of sum_a z_a X_a.
std::vector<PolyD> field_from_frame(const CarnotGroup& G, const std::vector<PolyD>& z);
/// Rewrites a coframe-basis form in the dx basis.
FormD coframe_to_dx(const CarnotGroup& G, const FormD& w);
FormD to_double(const PolyForm& w);

/// Smoothing of continuous inputs by quadrature, sampled on `targets`.
/// theta is given by its coframe coefficients.
SampledForm smooth_form(const Mollifier& M, const std::map<FormKey, ScalarFunction>& theta, int degree,
                        const QuadratureGrid& targets, bool parallel = true);
SampledVectorField smooth_field(const Mollifier& M, const std::vector<ScalarFunction>& z,
                                const QuadratureGrid& targets, bool parallel = true);

/// beta = phi * gamma with gamma a polynomial form in the dx basis.
struct BumpForm {
  PolyBump phi;
  PolyForm gamma;
};

/// |int theta^eps ^ beta - int theta ^ beta^eps|. The left side uses the moment
/// expansion of theta^eps; the right side pairs theta with beta^eps by iterated
/// quadrature over (y, u) with x = y u, the group product taken per node pair.
double verify_duality(const Mollifier& M, const PolyForm& theta, const BumpForm& beta);

/// |int i_(X^eps) alpha ^ beta - int i_X alpha ^ beta^eps|; alpha must be left-invariant.
double verify_interior_duality(const Mollifier& M, const PolyForm& alpha, const PolyVectorField& X,
                               const BumpForm& beta);

/// Sup over the nodes of `grid` of |d theta^eps - (d theta)^eps|, d theta^eps by central
/// differences of step h on the smoothed coefficients.
double verify_d_commutes(const Mollifier& M, const PolyForm& theta, double h, const QuadratureGrid& grid);

struct ConvergenceRow {
  double eps = 0.0;
  double sup_error = 0.0;
  double l1_error = 0.0;
};

/// |rho_eps * f - f| over the nodes of `grid` (sup and weighted L1) for each eps.
std::vector<ConvergenceRow> convergence_table(const CarnotGroup& G, const ScalarFunction& f,
                                              const std::vector<double>& eps, const QuadratureGrid& grid,
                                              int order = default_grid_order());

}  // namespace carnot
