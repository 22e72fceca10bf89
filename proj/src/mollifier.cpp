#include "carnot/mollifier.hpp"

#include <cmath>

namespace carnot {

namespace {

// f(y^-1 x) substitutes: x occupies variables 0..n-1, y variables n..2n-1.
std::vector<Poly> translated_substitutes(const CarnotGroup& G) {
  const int n = G.dim();
  std::vector<Poly> ab;
  for (int i = 0; i < n; ++i) ab.push_back(Poly::variable(2 * n, n + i) * Rational(-1));
  for (int i = 0; i < n; ++i) ab.push_back(Poly::variable(2 * n, i));
  std::vector<Poly> subs;
  for (const auto& c : G.law()) subs.push_back(c.compose(ab));
  return subs;
}

template <class T>
PolyD integrate_y(const Mollifier& M, const Polynomial<T>& g, int n) {
  PolyD out(n);
  Monomial x(n), y(n);
  for (const auto& [m, c] : g.terms()) {
    bool odd = false;
    for (int i = 0; i < n; ++i) {
      x[i] = m[i];
      y[i] = m[n + i];
      odd = odd || (y[i] % 2);
    }
    if (odd) continue;
    out.add_term(x, to_double(c) * M.moment(y));
  }
  return out;
}

}  // namespace

Mollifier::Mollifier(const CarnotGroup& G, double eps, int order) : G_(&G), eps_(eps), order_(order) {
  if (!(eps > 0.0)) throw PreconditionError("Mollifier: eps must be positive");
  const int n = G.dim();
  a_ = std::pow(double(n), -1.0 / G.gauge_exponent());
  double mass = 1.0;
  for (int i = 0; i < n; ++i) mass *= std::pow(a_, G.weights()[i]) * bump_mass();
  C_ = 1.0 / mass;
  std::vector<Rule1D> axes;
  const Rule1D base = bump_weighted_rule(order);
  for (int i = 0; i < n; ++i) {
    half_.push_back(std::pow(eps * a_, G.weights()[i]));
    Rule1D r = base;
    for (auto& x : r.nodes) x *= half_[i];
    axes.push_back(std::move(r));
  }
  rule_ = QuadratureGrid(std::move(axes));
}

double Mollifier::operator()(const double* x) const {
  const int n = G_->dim();
  double v = C_;
  for (int i = 0; i < n; ++i) {
    const double y = x[i] / std::pow(eps_, G_->weights()[i]);
    v *= bump_profile(y / std::pow(a_, G_->weights()[i]));
    if (v == 0.0) return 0.0;
  }
  return v * std::pow(eps_, -G_->homogeneous_dimension());
}

double Mollifier::peak() const {
  std::vector<double> zero(G_->dim(), 0.0);
  return (*this)(zero.data());
}

QuadratureGrid Mollifier::rule(int order) const {
  std::vector<Rule1D> axes;
  const Rule1D base = bump_weighted_rule(order);
  for (int i = 0; i < G_->dim(); ++i) {
    Rule1D r = base;
    for (auto& x : r.nodes) x *= half_[i];
    axes.push_back(std::move(r));
  }
  return QuadratureGrid(std::move(axes));
}

double Mollifier::moment(const Monomial& m) const {
  int kmax = 0;
  for (auto e : m) kmax = std::max<int>(kmax, e);
  const auto& mom = bump_moments(kmax);
  double v = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i) v *= mom[m[i]] * std::pow(half_[i], m[i]);
  return v;
}

std::vector<double> Mollifier::support_lo() const {
  std::vector<double> r(half_);
  for (auto& v : r) v = -v;
  return r;
}

std::vector<double> Mollifier::support_hi() const { return half_; }

double direct_integral(const Mollifier& M, int order, int panels, bool parallel) {
  std::vector<Rule1D> axes;
  for (int i = 0; i < M.group().dim(); ++i) {
    axes.push_back(composite_gauss(order, panels, -M.half_width(i), M.half_width(i)));
  }
  const QuadratureGrid grid(std::move(axes));
  ScalarFunction rho = [&M](const double* y) { return M(y); };
  return parallel ? kernels::omp::tensor_sum(grid, rho) : kernels::serial::tensor_sum(grid, rho);
}

namespace {

// Interval enclosure of the law components over a box in (a, b).
std::vector<Interval> law_range(const CarnotGroup& G, const std::vector<double>& lo, const std::vector<double>& hi) {
  std::vector<Interval> out;
  for (const auto& c : G.law()) out.push_back(bound_over_box(c.cast<double>(), lo, hi));
  return out;
}

void check_domain(const std::vector<Interval>& range,
                  const std::optional<std::pair<std::vector<double>, std::vector<double>>>& domain) {
  if (!domain) return;
  for (std::size_t i = 0; i < range.size(); ++i) {
    if (range[i].lo < domain->first[i] || range[i].hi > domain->second[i]) {
      throw DomainError("convolve: the mollifier support leaves the sampled region along coordinate " +
                        std::to_string(i + 1));
    }
  }
}

}  // namespace

double convolve(const Mollifier& M, const ScalarFunction& f, const double* x, ConvolutionForm form, int panels,
                const std::optional<std::pair<std::vector<double>, std::vector<double>>>& domain) {
  const CarnotGroup& G = M.group();
  const int n = G.dim();
  const auto slo = M.support_lo(), shi = M.support_hi();
  // f is evaluated on {y^-1 x : y in supp}
  {
    std::vector<double> lo(slo), hi(shi);
    lo.insert(lo.end(), x, x + n);
    hi.insert(hi.end(), x, x + n);
    check_domain(law_range(G, lo, hi), domain);
  }
  std::vector<double> y(n), z(n), w(n);
  if (form == ConvolutionForm::Translated) {
    const auto& rule = M.rule();
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      rule.point(k, y.data());
      for (auto& v : y) v = -v;
      G.product(y.data(), x, z.data());
      acc += rule.weight(k) * f(z.data());
    }
    return acc;
  }
  if (form == ConvolutionForm::Inverted) {
    std::vector<Rule1D> axes;
    for (int i = 0; i < n; ++i) axes.push_back(composite_gauss(M.order(), panels, slo[i], shi[i]));
    const QuadratureGrid grid(std::move(axes));
    double acc = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      grid.point(k, y.data());
      for (int i = 0; i < n; ++i) w[i] = -y[i];
      const double r = M(w.data());
      if (r == 0.0) continue;
      G.product(y.data(), x, z.data());
      acc += grid.weight(k) * r * f(z.data());
    }
    return acc;
  }
  // Defining form: y ranges over the bounding box of supp^-1 x = supp x.
  std::vector<double> lo(slo), hi(shi);
  lo.insert(lo.end(), x, x + n);
  hi.insert(hi.end(), x, x + n);
  const auto range = law_range(G, lo, hi);
  std::vector<Rule1D> axes;
  for (int i = 0; i < n; ++i) axes.push_back(composite_gauss(M.order(), panels, range[i].lo, range[i].hi));
  const QuadratureGrid grid(std::move(axes));
  std::vector<double> xc(x, x + n);
  double acc = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.point(k, y.data());
    for (int i = 0; i < n; ++i) w[i] = -y[i];
    G.product(xc.data(), w.data(), z.data());
    const double r = M(z.data());
    if (r == 0.0) continue;
    acc += grid.weight(k) * r * f(y.data());
  }
  return acc;
}

PolyD convolve(const Mollifier& M, const Poly& f) {
  const int n = M.group().dim();
  if (int(f.nvars()) != n) throw DimensionMismatch("convolve: polynomial variable count");
  return integrate_y(M, f.compose(translated_substitutes(M.group())), n);
}

PolyD convolve(const Mollifier& M, const PolyD& f) {
  const int n = M.group().dim();
  if (int(f.nvars()) != n) throw DimensionMismatch("convolve: polynomial variable count");
  std::vector<PolyD> subs;
  for (const auto& s : translated_substitutes(M.group())) subs.push_back(s.cast<double>());
  return integrate_y(M, f.compose(subs), n);
}

std::pair<std::vector<double>, std::vector<double>> shrunk_box(const Mollifier& M, const std::vector<double>& lo,
                                                               const std::vector<double>& hi) {
  const CarnotGroup& G = M.group();
  const int n = G.dim();
  const auto subs = translated_substitutes(G);
  std::vector<double> blo(lo), bhi(hi);
  const auto slo = M.support_lo(), shi = M.support_hi();
  blo.insert(blo.end(), slo.begin(), slo.end());
  bhi.insert(bhi.end(), shi.begin(), shi.end());
  std::vector<double> out_lo(n), out_hi(n);
  for (int i = 0; i < n; ++i) {
    // displacement (y^-1 x)_i - x_i
    const PolyD disp = subs[i].cast<double>() - PolyD::variable(2 * n, i);
    const Interval r = bound_over_box(disp, blo, bhi);
    out_lo[i] = lo[i] - std::min(r.lo, 0.0);
    out_hi[i] = hi[i] - std::max(r.hi, 0.0);
    if (!(out_hi[i] > out_lo[i])) throw PreconditionError("shrunk_box: the eps-shrunk domain is empty");
  }
  return {out_lo, out_hi};
}

FormD to_double(const PolyForm& w) {
  FormD r(w.dim(), w.degree());
  for (const auto& [k, c] : w.components()) r.add(k, c.cast<double>());
  return r;
}

FormD smooth_form(const Mollifier& M, const PolyForm& theta) {
  const PolyForm ts = M.group().to_coframe_basis(theta);
  FormD r(theta.dim(), theta.degree());
  for (const auto& [k, c] : ts.components()) r.add(k, convolve(M, c));
  return r;
}

std::vector<PolyD> smooth_field(const Mollifier& M, const PolyVectorField& X) {
  std::vector<PolyD> out;
  for (const auto& z : M.group().frame_coefficients(X)) out.push_back(convolve(M, z));
  return out;
}

std::vector<PolyD> field_from_frame(const CarnotGroup& G, const std::vector<PolyD>& z) {
  const int n = G.dim();
  std::vector<PolyD> out(n, PolyD(n));
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) {
      const auto& c = G.left_frame()[a][i];
      if (!c.is_zero()) out[i] += z[a] * c.cast<double>();
    }
  }
  return out;
}

FormD coframe_to_dx(const CarnotGroup& G, const FormD& w) {
  std::vector<FormD> images;
  for (const auto& s : G.coframe()) images.push_back(to_double(s));
  return substitute<PolyD>(w, images, [](const PolyD& c) { return c; });
}

SampledForm smooth_form(const Mollifier& M, const std::map<FormKey, ScalarFunction>& theta, int degree,
                        const QuadratureGrid& targets, bool parallel) {
  const int n = M.group().dim();
  SampledForm out;
  out.n = n;
  out.degree = degree;
  out.grid = targets;
  std::vector<double> pts(targets.size() * n);
  for (std::size_t i = 0; i < targets.size(); ++i) targets.point(i, pts.data() + i * n);
  for (const auto& [k, f] : theta) {
    if (key_degree(k) != degree) throw DimensionMismatch("smooth_form: component of the wrong degree");
    auto& vals = out.coeffs[k];
    if (parallel) {
      kernels::omp::convolve(M.group(), M.rule(), f, pts, vals);
    } else {
      kernels::serial::convolve(M.group(), M.rule(), f, pts, vals);
    }
  }
  return out;
}

SampledVectorField smooth_field(const Mollifier& M, const std::vector<ScalarFunction>& z,
                                const QuadratureGrid& targets, bool parallel) {
  const int n = M.group().dim();
  if (int(z.size()) != n) throw DimensionMismatch("smooth_field: need one coefficient per frame field");
  SampledVectorField out;
  out.grid = targets;
  out.comps.resize(n);
  std::vector<double> pts(targets.size() * n);
  for (std::size_t i = 0; i < targets.size(); ++i) targets.point(i, pts.data() + i * n);
  for (int a = 0; a < n; ++a) {
    if (parallel) {
      kernels::omp::convolve(M.group(), M.rule(), z[a], pts, out.comps[a]);
    } else {
      kernels::serial::convolve(M.group(), M.rule(), z[a], pts, out.comps[a]);
    }
  }
  return out;
}

namespace {

int gauss_order_for(int degree) { return std::max(1, (degree + 2) / 2); }

// int c(x) (rho_eps * (phi g))(x) dx = int rho(y) int c(y u) phi(u) g(u) du dy.
double pair_with_smoothed_bump(const Mollifier& M, const Poly& c, const PolyBump& phi, const Poly& g) {
  const CarnotGroup& G = M.group();
  const int n = G.dim();
  if (c.is_zero() || g.is_zero()) return 0.0;
  // degrees of c(y u) select orders that integrate exactly
  const Poly cyu = c.compose(G.law());
  std::vector<int> uorders(n);
  int ydeg = 0;
  for (int i = 0; i < n; ++i) {
    ydeg = std::max(ydeg, cyu.degree_in(i));
    uorders[i] = gauss_order_for(std::max(0, cyu.degree_in(n + i)) + 2 * phi.power + std::max(0, g.degree_in(i)));
  }
  const QuadratureGrid yrule = M.rule(gauss_order_for(ydeg));
  const QuadratureGrid ugrid = phi.grid(uorders);
  const CompiledPolynomial cc(c), gc(g);
  std::vector<double> ys(yrule.size() * n), ws(yrule.size());
  for (std::size_t k = 0; k < yrule.size(); ++k) {
    yrule.point(k, ys.data() + k * n);
    ws[k] = yrule.weight(k);
  }
  ScalarFunction inner = [&](const double* u) {
    const double pg = phi(u) * gc(u);
    if (pg == 0.0) return 0.0;
    double z[64];
    double acc = 0.0;
    for (std::size_t k = 0; k < ws.size(); ++k) {
      G.product(ys.data() + k * n, u, z);
      acc += ws[k] * cc(z);
    }
    return pg * acc;
  };
  return kernels::omp::tensor_sum(ugrid, inner);
}

// int theta ^ beta^eps for theta given against the coframe.
double pair_smoothed_beta(const Mollifier& M, const PolyForm& theta_sigma, const BumpForm& beta) {
  const CarnotGroup& G = M.group();
  const int n = G.dim();
  const FormKey all = (FormKey(1) << n) - 1;
  const PolyForm gs = G.to_coframe_basis(beta.gamma);
  double acc = 0.0;
  for (const auto& [kt, ct] : theta_sigma.components()) {
    for (const auto& [kg, cg] : gs.components()) {
      if ((kt | kg) != all || (kt & kg)) continue;
      acc += wedge_sign(kt, kg) * pair_with_smoothed_bump(M, ct, beta.phi, cg);
    }
  }
  return acc;
}

// int w ^ beta for w (coframe basis, double coefficients) of complementary degree.
double pair_with_beta(const CarnotGroup& G, const FormD& w_sigma, const BumpForm& beta) {
  const int n = G.dim();
  const FormD top = wedge(w_sigma, to_double(G.to_coframe_basis(beta.gamma)));
  if (top.degree() != n) throw DimensionMismatch("duality: degrees are not complementary");
  return integrate_against(top.component((FormKey(1) << n) - 1), beta.phi);
}

}  // namespace

double verify_duality(const Mollifier& M, const PolyForm& theta, const BumpForm& beta) {
  const CarnotGroup& G = M.group();
  if (theta.degree() + beta.gamma.degree() != G.dim()) throw DimensionMismatch("verify_duality: degrees");
  const double lhs = pair_with_beta(G, smooth_form(M, theta), beta);
  const double rhs = pair_smoothed_beta(M, G.to_coframe_basis(theta), beta);
  return std::abs(lhs - rhs);
}

double verify_interior_duality(const Mollifier& M, const PolyForm& alpha, const PolyVectorField& X,
                               const BumpForm& beta) {
  const CarnotGroup& G = M.group();
  const PolyForm as = G.to_coframe_basis(alpha);
  for (const auto& [k, c] : as.components()) {
    if (c.degree() > 0) throw PreconditionError("verify_interior_duality: alpha is not left-invariant");
  }
  if (alpha.degree() - 1 + beta.gamma.degree() != G.dim()) throw DimensionMismatch("verify_interior_duality: degrees");
  const FormD lhs_form = interior(smooth_field(M, X), to_double(as));
  const double lhs = pair_with_beta(G, lhs_form, beta);
  const double rhs = pair_smoothed_beta(M, interior(G.frame_coefficients(X), as), beta);
  return std::abs(lhs - rhs);
}

double verify_d_commutes(const Mollifier& M, const PolyForm& theta, double h, const QuadratureGrid& grid) {
  const CarnotGroup& G = M.group();
  const int n = G.dim();
  const FormD a = coframe_to_dx(G, smooth_form(M, theta));
  const FormD b = coframe_to_dx(G, smooth_form(M, exterior_derivative(theta)));
  std::vector<std::pair<FormKey, CompiledPolynomial>> ac, bc;
  for (const auto& [k, c] : a.components()) ac.emplace_back(k, CompiledPolynomial(c));
  for (const auto& [k, c] : b.components()) bc.emplace_back(k, CompiledPolynomial(c));
  double worst = 0.0;
  std::vector<double> x(n), xp(n), xm(n);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.point(p, x.data());
    std::map<FormKey, double> diff;
    for (const auto& [k, c] : ac) {
      for (int i = 0; i < n; ++i) {
        if (k & (FormKey(1) << i)) continue;
        xp = x;
        xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double di = (c(xp.data()) - c(xm.data())) / (2 * h);
        diff[k | (FormKey(1) << i)] += wedge_sign(FormKey(1) << i, k) * di;
      }
    }
    for (const auto& [k, c] : bc) diff[k] -= c(x.data());
    for (const auto& [k, v] : diff) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

std::vector<ConvergenceRow> convergence_table(const CarnotGroup& G, const ScalarFunction& f,
                                              const std::vector<double>& eps, const QuadratureGrid& grid,
                                              int order) {
  const int n = G.dim();
  std::vector<double> pts(grid.size() * n), exact(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, pts.data() + i * n);
    exact[i] = f(pts.data() + i * n);
  }
  std::vector<ConvergenceRow> out;
  for (double e : eps) {
    const Mollifier M(G, e, order);
    std::vector<double> vals;
    kernels::omp::convolve(G, M.rule(), f, pts, vals);
    ConvergenceRow row{e, 0.0, 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = std::abs(vals[i] - exact[i]);
      row.sup_error = std::max(row.sup_error, d);
      row.l1_error += grid.weight(i) * d;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace carnot
