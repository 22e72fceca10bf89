#include "carnot/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <numbers>

namespace carnot {

Rule1D Rule1D::mapped(double a, double b) const {
  Rule1D r;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t i = 0; i < size(); ++i) {
    r.nodes.push_back(c + h * nodes[i]);
    r.weights.push_back(h * weights[i]);
  }
  return r;
}

Rule1D gauss_legendre(int order) {
  if (order < 1) throw PreconditionError("gauss_legendre: order must be positive");
  Rule1D r;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    r.weights[i] = r.weights[order - 1 - i] = w;
  }
  if (order % 2) r.nodes[order / 2] = 0.0;
  return r;
}

Rule1D composite_gauss(int order, int panels, double a, double b) {
  const Rule1D g = gauss_legendre(order);
  Rule1D r;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + (b - a) * p / panels, pb = a + (b - a) * (p + 1) / panels;
    auto m = g.mapped(pa, pb);
    r.nodes.insert(r.nodes.end(), m.nodes.begin(), m.nodes.end());
    r.weights.insert(r.weights.end(), m.weights.begin(), m.weights.end());
  }
  return r;
}

double bump_profile(double u) {
  const double q = 1.0 - u * u;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

namespace {

// Discretization of b(u) du accurate to ~1e-16.
const Rule1D& fine_bump_measure() {
  static const Rule1D rule = [] {
    Rule1D r = composite_gauss(20, 40, -1.0, 1.0);
    for (std::size_t i = 0; i < r.size(); ++i) r.weights[i] *= bump_profile(r.nodes[i]);
    return r;
  }();
  return rule;
}

}  // namespace

double bump_mass() {
  static const double mass = [] {
    double s = 0.0;
    for (double w : fine_bump_measure().weights) s += w;
    return s;
  }();
  return mass;
}

const std::vector<double>& bump_moments(int kmax) {
  constexpr int kMax = 160;
  static const std::vector<double> cache = [] {
    const auto& f = fine_bump_measure();
    std::vector<double> m(kMax + 1, 0.0);
    for (int k = 0; k <= kMax; k += 2) {
      double s = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) s += f.weights[i] * std::pow(f.nodes[i], k);
      m[k] = s / bump_mass();
    }
    return m;
  }();
  if (kmax > kMax) throw PreconditionError("bump_moments: order above " + std::to_string(kMax));
  return cache;
}

Rule1D bump_weighted_rule(int order) {
  if (order < 1) throw PreconditionError("bump_weighted_rule: order must be positive");
  // Stieltjes procedure on the discretized measure, then Golub-Welsch.
  const auto& f = fine_bump_measure();
  const std::size_t m = f.size();
  std::vector<double> p_prev(m, 0.0), p(m, 1.0), p_next(m);
  std::vector<double> alpha(order), beta(order);
  for (int k = 0; k < order; ++k) {
    double norm = 0.0, xnorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      norm += f.weights[i] * p[i] * p[i];
      xnorm += f.weights[i] * f.nodes[i] * p[i] * p[i];
    }
    alpha[k] = xnorm / norm;
    beta[k] = norm;  // p_prev has unit norm after rescaling
    for (std::size_t i = 0; i < m; ++i) {
      p_next[i] = (f.nodes[i] - alpha[k]) * p[i] - (k == 0 ? 0.0 : beta[k] * p_prev[i]);
    }
    // rescale to keep the recurrence in range; only ratios of norms matter
    const double s = std::sqrt(norm);
    for (std::size_t i = 0; i < m; ++i) {
      p_prev[i] = p[i] / s;
      p[i] = p_next[i] / s;
    }
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 0; k < order; ++k) {
    J(k, k) = alpha[k];
    if (k + 1 < order) J(k, k + 1) = J(k + 1, k) = std::sqrt(beta[k + 1]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule1D r;
  for (int k = 0; k < order; ++k) {
    r.nodes.push_back(es.eigenvalues()(k));
    const double v = es.eigenvectors()(0, k);
    r.weights.push_back(v * v);
  }
  // the weight is even: symmetrize away round-off
  for (int k = 0; k < order / 2; ++k) {
    const double x = 0.5 * (r.nodes[order - 1 - k] - r.nodes[k]);
    const double w = 0.5 * (r.weights[k] + r.weights[order - 1 - k]);
    r.nodes[k] = -x;
    r.nodes[order - 1 - k] = x;
    r.weights[k] = r.weights[order - 1 - k] = w;
  }
  if (order % 2) r.nodes[order / 2] = 0.0;
  double total = 0.0;
  for (double w : r.weights) total += w;
  for (double& w : r.weights) w /= total;
  return r;
}

QuadratureGrid::QuadratureGrid(std::vector<double> lo, std::vector<double> hi, int order)
    : QuadratureGrid(lo, hi, std::vector<int>(lo.size(), order)) {}

QuadratureGrid::QuadratureGrid(std::vector<double> lo, std::vector<double> hi, std::vector<int> orders) {
  if (lo.size() != hi.size() || lo.size() != orders.size()) throw DimensionMismatch("QuadratureGrid: bounds mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i])) throw PreconditionError("QuadratureGrid: empty box");
    axes_.push_back(gauss_legendre(orders[i]).mapped(lo[i], hi[i]));
  }
  lo_ = std::move(lo);
  hi_ = std::move(hi);
  init();
}

QuadratureGrid::QuadratureGrid(std::vector<Rule1D> axes) : axes_(std::move(axes)) {
  for (const auto& a : axes_) {
    if (a.size() == 0) throw PreconditionError("QuadratureGrid: empty axis rule");
    lo_.push_back(*std::min_element(a.nodes.begin(), a.nodes.end()));
    hi_.push_back(*std::max_element(a.nodes.begin(), a.nodes.end()));
  }
  init();
}

void QuadratureGrid::init() {
  size_ = axes_.empty() ? 0 : 1;
  for (const auto& a : axes_) size_ *= a.size();
}

void QuadratureGrid::point(std::size_t idx, double* x) const {
  for (int i = dim() - 1; i >= 0; --i) {
    const std::size_t m = axes_[i].size();
    x[i] = axes_[i].nodes[idx % m];
    idx /= m;
  }
}

double QuadratureGrid::weight(std::size_t idx) const {
  double w = 1.0;
  for (int i = dim() - 1; i >= 0; --i) {
    const std::size_t m = axes_[i].size();
    w *= axes_[i].weights[idx % m];
    idx /= m;
  }
  return w;
}

namespace {

double power_int(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

double PolyBump::operator()(const double* x) const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) {
    const double u = (x[i] - center[i]) / radius[i];
    const double q = 1.0 - u * u;
    if (q <= 0.0) return 0.0;
    v *= power_int(q, power);
  }
  return v;
}

double PolyBump::partial(int i, const double* x) const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) {
    const double u = (x[a] - center[a]) / radius[a];
    const double q = 1.0 - u * u;
    if (q <= 0.0) return 0.0;
    if (a == i) {
      v *= power * power_int(q, power - 1) * (-2.0 * u / radius[a]);
    } else {
      v *= power_int(q, power);
    }
  }
  return v;
}

std::vector<double> PolyBump::lo() const {
  std::vector<double> r(dim());
  for (int i = 0; i < dim(); ++i) r[i] = center[i] - radius[i];
  return r;
}

std::vector<double> PolyBump::hi() const {
  std::vector<double> r(dim());
  for (int i = 0; i < dim(); ++i) r[i] = center[i] + radius[i];
  return r;
}

double PolyBump::axis_moment(int i, int k) const {
  const auto rule = gauss_legendre((k + 2 * power) / 2 + 1).mapped(center[i] - radius[i], center[i] + radius[i]);
  double s = 0.0;
  for (std::size_t p = 0; p < rule.size(); ++p) {
    const double u = (rule.nodes[p] - center[i]) / radius[i];
    s += rule.weights[p] * power_int(rule.nodes[p], k) * power_int(1.0 - u * u, power);
  }
  return s;
}

double PolyBump::axis_derivative_moment(int i, int k) const {
  const auto rule = gauss_legendre((k + 2 * power) / 2 + 1).mapped(center[i] - radius[i], center[i] + radius[i]);
  double s = 0.0;
  for (std::size_t p = 0; p < rule.size(); ++p) {
    const double u = (rule.nodes[p] - center[i]) / radius[i];
    const double d = power * power_int(1.0 - u * u, power - 1) * (-2.0 * u / radius[i]);
    s += rule.weights[p] * power_int(rule.nodes[p], k) * d;
  }
  return s;
}

QuadratureGrid PolyBump::grid(int order) const { return QuadratureGrid(lo(), hi(), order); }
QuadratureGrid PolyBump::grid(const std::vector<int>& orders) const { return QuadratureGrid(lo(), hi(), orders); }

namespace {

double integrate_moments(const PolyD& p, const PolyBump& phi, int deriv_axis) {
  const int n = phi.dim();
  // per-axis moment tables up to the degree needed
  std::vector<std::vector<double>> mom(n);
  for (int i = 0; i < n; ++i) {
    const int dmax = std::max(0, p.degree_in(i));
    for (int k = 0; k <= dmax; ++k) {
      mom[i].push_back(i == deriv_axis ? phi.axis_derivative_moment(i, k) : phi.axis_moment(i, k));
    }
  }
  double acc = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double t = c;
    for (int i = 0; i < n; ++i) t *= mom[i][m[i]];
    acc += t;
  }
  return acc;
}

}  // namespace

double integrate_against(const PolyD& p, const PolyBump& phi) { return integrate_moments(p, phi, -1); }

double integrate_against_partial(const PolyD& p, const PolyBump& phi, int i) { return integrate_moments(p, phi, i); }

int default_grid_order() {
  if (const char* env = std::getenv("CARNOT_GRID_ORDER")) {
    const int v = std::atoi(env);
    if (v >= 1 && v <= 64) return v;
  }
  return 8;
}

double SampledForm::sup_norm() const {
  double s = 0.0;
  for (const auto& [k, v] : coeffs) {
    for (double x : v) s = std::max(s, std::abs(x));
  }
  return s;
}

double SampledVectorField::sup_norm() const {
  double s = 0.0;
  for (const auto& v : comps) {
    for (double x : v) s = std::max(s, std::abs(x));
  }
  return s;
}

SampledForm sample_form(const CarnotGroup& G, const PolyForm& w, const QuadratureGrid& grid) {
  if (grid.dim() != G.dim()) throw DimensionMismatch("sample_form: grid dimension");
  SampledForm out;
  out.n = G.dim();
  out.degree = w.degree();
  out.grid = grid;
  std::vector<double> x(G.dim());
  const PolyForm ws = G.to_coframe_basis(w);
  for (const auto& [k, c] : ws.components()) {
    const CompiledPolynomial cp(c);
    auto& vals = out.coeffs[k];
    vals.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid.point(i, x.data());
      vals[i] = cp(x.data());
    }
  }
  return out;
}

SampledVectorField sample_field(const CarnotGroup& G, const VectorFunction& Z, const QuadratureGrid& grid) {
  const int n = G.dim();
  if (grid.dim() != n) throw DimensionMismatch("sample_field: grid dimension");
  std::vector<std::vector<CompiledPolynomial>> minv(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) minv[i].emplace_back(G.coframe_matrix()[i][j]);
  }
  SampledVectorField out;
  out.grid = grid;
  out.comps.assign(n, std::vector<double>(grid.size()));
  std::vector<double> x(n), c(n);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.point(p, x.data());
    Z(x.data(), c.data());
    for (int i = 0; i < n; ++i) {
      double z = 0.0;
      for (int j = 0; j < n; ++j) z += minv[i][j](x.data()) * c[j];
      out.comps[i][p] = z;
    }
  }
  return out;
}

SampledVectorField sample_field(const CarnotGroup& G, const PolyVectorField& Z, const QuadratureGrid& grid) {
  std::vector<CompiledPolynomial> comp;
  for (const auto& c : Z.components()) comp.emplace_back(c);
  return sample_field(
      G, [&](const double* x, double* out) {
        for (std::size_t i = 0; i < comp.size(); ++i) out[i] = comp[i](x);
      },
      grid);
}

SampledForm wedge(const SampledForm& a, const SampledForm& b) {
  if (a.n != b.n || a.grid.size() != b.grid.size()) throw DimensionMismatch("wedge: sampled forms on different grids");
  SampledForm out;
  out.n = a.n;
  out.degree = a.degree + b.degree;
  out.grid = a.grid;
  if (out.degree > out.n) return out;
  for (const auto& [ka, va] : a.coeffs) {
    for (const auto& [kb, vb] : b.coeffs) {
      if (ka & kb) continue;
      const double s = wedge_sign(ka, kb);
      auto& dst = out.coeffs[ka | kb];
      dst.resize(va.size(), 0.0);
      for (std::size_t i = 0; i < va.size(); ++i) dst[i] += s * va[i] * vb[i];
    }
  }
  return out;
}

SampledForm interior_product(const SampledVectorField& X, const SampledForm& w) {
  if (w.degree == 0) throw PreconditionError("interior_product: 0-form");
  SampledForm out;
  out.n = w.n;
  out.degree = w.degree - 1;
  out.grid = w.grid;
  for (const auto& [k, v] : w.coeffs) {
    const auto idx = key_indices(k);
    for (std::size_t p = 0; p < idx.size(); ++p) {
      const double s = p % 2 ? -1.0 : 1.0;
      auto& dst = out.coeffs[k & ~(FormKey(1) << idx[p])];
      dst.resize(v.size(), 0.0);
      const auto& xc = X.comps.at(idx[p]);
      for (std::size_t i = 0; i < v.size(); ++i) dst[i] += s * xc[i] * v[i];
    }
  }
  return out;
}

bool is_vertical(const CarnotGroup& G, const SampledForm& eta, double rel_tol) {
  if (eta.degree != 1) throw PreconditionError("is_vertical: expects a 1-form");
  const double tol = rel_tol * eta.sup_norm();
  for (int j = 0; j < G.algebra().layer_dim(1); ++j) {
    auto it = eta.coeffs.find(FormKey(1) << j);
    if (it == eta.coeffs.end()) continue;
    for (double v : it->second) {
      if (std::abs(v) > tol) return false;
    }
  }
  return true;
}

Weight weight_of(const CarnotGroup& G, const SampledForm& w, double rel_tol) {
  const double tol = rel_tol * w.sup_norm();
  bool any = false;
  int best = 0;
  for (std::size_t i = 0; i < w.grid.size(); ++i) {
    bool seen = false;
    int wt = 0;
    for (const auto& [k, v] : w.coeffs) {
      if (std::abs(v[i]) <= tol) continue;
      const int kw = coframe_weight(G, k);
      if (seen && kw != wt) return Weight::mixed();
      seen = true;
      wt = kw;
    }
    if (seen) {
      best = any ? std::max(best, wt) : wt;
      any = true;
    }
  }
  return any ? Weight::homogeneous(best) : Weight::zero();
}

}  // namespace carnot
