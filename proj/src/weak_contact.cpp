#include "carnot/weak_contact.hpp"

#include <cmath>
#include <Eigen/Dense>
#include <algorithm>
#include <iomanip>
#include <memory>
#include <sstream>

#include "carnot/exterior.hpp"

namespace carnot {

namespace {

// Coefficients of the integrand, all against dx_1 ^ ... ^ dx_n:
//   i_Z(d eta) ^ gamma = sum_a z_a p_a,  eta(Z) = sum_a z_a e_a,
//   dx_i ^ gamma = c_i,  d gamma = cd.
struct Prepared {
  std::vector<PolyD> p, e, c;
  PolyD cd;
};

struct CompiledPrepared {
  std::vector<CompiledPolynomial> p, e, c;
  CompiledPolynomial cd;
};

FormKey top_key(int n) { return (FormKey(1) << n) - 1; }

Prepared prepare(const CarnotGroup& G, const PolyForm& eta, const PolyForm& gamma) {
  const int n = G.dim();
  if (eta.degree() != 1 || gamma.degree() != n - 1) throw PreconditionError("weak functional: need a 1-form and an (n-1)-form");
  Prepared P;
  const PolyForm deta = exterior_derivative(eta);
  for (int a = 0; a < n; ++a) {
    const auto& Xa = G.left_frame()[a];
    P.p.push_back(wedge(interior_product(Xa, deta), gamma).component(top_key(n)).cast<double>());
    P.e.push_back(interior_product(Xa, eta).component(0).cast<double>());
  }
  for (int i = 0; i < n; ++i) {
    P.c.push_back(wedge(constant_form(n, FormKey(1) << i), gamma).component(top_key(n)).cast<double>());
  }
  P.cd = exterior_derivative(gamma).component(top_key(n)).cast<double>();
  return P;
}

PolyForm gamma_of(const CarnotGroup& G, const TestPair& pair) {
  const int n = G.dim();
  const int d1 = G.algebra().layer_dim(1);
  if (int(pair.beta.size()) != d1) throw DimensionMismatch("TestPair: need one beta coefficient per layer-1 slot");
  PolyForm gamma(n, n - 1);
  for (int i = 0; i < d1; ++i) {
    if (pair.beta[i].is_zero()) continue;
    PolyForm s = sigma_hat(G, i);
    const Poly b = pair.beta[i];
    gamma += s.map_coefficients([&b](const Poly& c) { return b * c; });
  }
  return gamma;
}

void check_pair(const CarnotGroup& G, const TestPair& pair) {
  if (pair.phi.dim() != G.dim()) throw DimensionMismatch("TestPair: bump dimension");
  if (!is_vertical(G, pair.eta)) throw PreconditionError("TestPair: eta is not vertical (" + pair.label + ")");
}

Prepared prepare(const CarnotGroup& G, const TestPair& pair) {
  check_pair(G, pair);
  return prepare(G, pair.eta, gamma_of(G, pair));
}

CompiledPrepared compile(const Prepared& P) {
  CompiledPrepared C;
  for (const auto& q : P.p) C.p.emplace_back(q);
  for (const auto& q : P.e) C.e.emplace_back(q);
  for (const auto& q : P.c) C.c.emplace_back(q);
  C.cd = CompiledPolynomial(P.cd);
  return C;
}

double polynomial_functional(const std::vector<PolyD>& z, const Prepared& P, const PolyBump& phi) {
  const int n = phi.dim();
  if (int(z.size()) != n) throw DimensionMismatch("weak functional: need n frame coefficients");
  PolyD E(n), T(n);
  for (int a = 0; a < n; ++a) {
    if (z[a].is_zero()) continue;
    if (!P.e[a].is_zero()) E += z[a] * P.e[a];
    if (!P.p[a].is_zero()) T += z[a] * P.p[a];
  }
  double r = 0.0;
  if (!E.is_zero()) {
    T -= E * P.cd;
    for (int i = 0; i < n; ++i) {
      if (!P.c[i].is_zero()) r -= integrate_against_partial(E * P.c[i], phi, i);
    }
  }
  return r + integrate_against(T, phi);
}

// Sum over the nodes of `grid` with frame samples zs (node-major, n per node).
double sampled_functional(const CompiledPrepared& C, const QuadratureGrid& grid, const std::vector<double>& zs,
                          const ScalarFunction& phi, const VectorFunction& grad) {
  const int n = grid.dim();
  double total = 0.0;
  std::vector<double> x(n), g(n);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.point(k, x.data());
    const double* z = zs.data() + k * n;
    double E = 0.0, T = 0.0;
    for (int a = 0; a < n; ++a) {
      if (z[a] == 0.0) continue;
      if (C.e[a].size()) E += z[a] * C.e[a](x.data());
      if (C.p[a].size()) T += z[a] * C.p[a](x.data());
    }
    const double f = phi(x.data());
    double v = (T - E * C.cd(x.data())) * f;
    if (E != 0.0) {
      grad(x.data(), g.data());
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        if (C.c[i].size()) s += C.c[i](x.data()) * g[i];
      }
      v -= E * s;
    }
    total += grid.weight(k) * v;
  }
  return total;
}

ScalarFunction bump_value(const PolyBump& phi) {
  return [phi](const double* x) { return phi(x); };
}

VectorFunction bump_gradient(const PolyBump& phi) {
  return [phi](const double* x, double* g) {
    for (int i = 0; i < phi.dim(); ++i) g[i] = phi.partial(i, x);
  };
}

std::vector<double> sample_frame(const FrameFunction& z, const QuadratureGrid& grid) {
  const int n = grid.dim();
  std::vector<double> out(grid.size() * n);
  const long N = long(grid.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long k = 0; k < N; ++k) {
    std::vector<double> x(n);
    grid.point(std::size_t(k), x.data());
    z(x.data(), out.data() + std::size_t(k) * n);
  }
  return out;
}

struct BumpGroup {
  PolyBump phi;
  QuadratureGrid grid;
  std::vector<std::size_t> pairs;
};

bool same_bump(const PolyBump& a, const PolyBump& b) {
  return a.center == b.center && a.radius == b.radius && a.power == b.power;
}

std::vector<BumpGroup> group_by_bump(const std::vector<TestPair>& family, int order) {
  std::vector<BumpGroup> groups;
  for (std::size_t p = 0; p < family.size(); ++p) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const BumpGroup& g) { return same_bump(g.phi, family[p].phi); });
    if (it == groups.end()) {
      groups.push_back({family[p].phi, family[p].phi.grid(order), {}});
      it = groups.end() - 1;
    }
    it->pairs.push_back(p);
  }
  return groups;
}

WeakContactReport finish(std::vector<double> values, const std::vector<TestPair>& family, double tol) {
  WeakContactReport r;
  r.tol = tol;
  r.residuals = std::move(values);
  for (std::size_t p = 0; p < family.size(); ++p) {
    r.labels.push_back(family[p].label);
    if (r.residuals[p] > r.max_residual) {
      r.max_residual = r.residuals[p];
      r.worst = p;
    }
  }
  r.passed = r.max_residual <= tol;
  return r;
}

WeakContactReport sampled_report(const CarnotGroup& G, const std::vector<TestPair>& family,
                                 const std::vector<BumpGroup>& groups, const std::vector<CompiledPrepared>& prepared,
                                 const std::vector<std::vector<double>>& samples, double tol) {
  (void)G;
  std::vector<double> values(family.size(), 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto f = bump_value(groups[g].phi);
    const auto df = bump_gradient(groups[g].phi);
    for (std::size_t p : groups[g].pairs) {
      values[p] = std::abs(sampled_functional(prepared[p], groups[g].grid, samples[g], f, df));
    }
  }
  return finish(std::move(values), family, tol);
}

std::vector<PolyD> to_frame(const CarnotGroup& G, const PolyVectorField& Z) {
  std::vector<PolyD> z;
  for (const auto& c : G.frame_coefficients(Z)) z.push_back(c.cast<double>());
  return z;
}

}  // namespace

TestPair standard_pair(const CarnotGroup& G, int t, int j, const PolyBump& phi) {
  const int n = G.dim();
  const int d1 = G.algebra().layer_dim(1);
  if (t < d1 || t >= n) throw PreconditionError("standard_pair: eta must be sigma_t with t in layer >= 2");
  if (j < 0 || j >= d1) throw PreconditionError("standard_pair: j must be a layer-1 slot");
  TestPair pair;
  pair.eta = G.coframe()[t];
  pair.phi = phi;
  pair.beta.assign(d1, Poly(std::size_t(n)));
  pair.beta[j] = Poly::constant(n, 1);
  std::ostringstream os;
  os << "sigma" << t + 1 << "|sigma-hat" << j + 1;
  pair.label = os.str();
  return pair;
}

std::vector<PolyBump> default_bumps(const std::vector<double>& lo, const std::vector<double>& hi) {
  const int n = int(lo.size());
  if (int(hi.size()) != n) throw DimensionMismatch("default_bumps: box bounds");
  std::vector<PolyBump> out;
  for (int s = 1; s <= 3; ++s) {
    for (int tau = -1; tau <= 1; ++tau) {
      PolyBump b;
      b.center.resize(n);
      b.radius.resize(n);
      for (int i = 0; i < n; ++i) {
        const double c = (lo[i] + hi[i]) / 2, h = (hi[i] - lo[i]) / 2;
        if (!(h > 0.0)) throw PreconditionError("default_bumps: empty box");
        const double r = std::ldexp(h, -s);
        const double omega = (i % 2 ? -1.0 : 1.0) * (0.3 + 0.4 * i / n);
        b.radius[i] = r;
        b.center[i] = c + tau * omega * (h - r);
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

std::vector<TestPair> default_test_family(const CarnotGroup& G, const std::vector<double>& lo,
                                          const std::vector<double>& hi) {
  if (int(lo.size()) != G.dim()) throw DimensionMismatch("default_test_family: box dimension");
  const auto bumps = default_bumps(lo, hi);
  const int d1 = G.algebra().layer_dim(1);
  std::vector<TestPair> family;
  for (std::size_t b = 0; b < bumps.size(); ++b) {
    for (int t = d1; t < G.dim(); ++t) {
      for (int j = 0; j < d1; ++j) {
        auto pair = standard_pair(G, t, j, bumps[b]);
        pair.label += "|bump" + std::to_string(b + 1);
        family.push_back(std::move(pair));
      }
    }
  }
  return family;
}

FrameFunction frame_function(const CarnotGroup& G, const VectorFunction& coords) {
  const int n = G.dim();
  auto minv = std::make_shared<std::vector<CompiledPolynomial>>();
  for (const auto& row : G.coframe_matrix()) {
    for (const auto& c : row) minv->emplace_back(c);
  }
  return [coords, minv, n](const double* x, double* z) {
    std::vector<double> v(n);
    coords(x, v.data());
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto& m = (*minv)[a * n + i];
        if (m.size()) s += m(x) * v[i];
      }
      z[a] = s;
    }
  };
}

FrameFunction frame_function(const CarnotGroup& G, const std::vector<PolyD>& z) {
  if (int(z.size()) != G.dim()) throw DimensionMismatch("frame_function: need n coefficients");
  auto cz = std::make_shared<std::vector<CompiledPolynomial>>();
  for (const auto& c : z) cz->emplace_back(c);
  return [cz](const double* x, double* out) {
    for (std::size_t a = 0; a < cz->size(); ++a) out[a] = (*cz)[a](x);
  };
}

double weak_functional(const CarnotGroup& G, const std::vector<PolyD>& z, const TestPair& pair) {
  return polynomial_functional(z, prepare(G, pair), pair.phi);
}

double weak_functional(const CarnotGroup& G, const PolyVectorField& Z, const TestPair& pair) {
  return weak_functional(G, to_frame(G, Z), pair);
}

double weak_functional(const CarnotGroup& G, const FrameFunction& z, const TestPair& pair, int order) {
  const auto C = compile(prepare(G, pair));
  const auto grid = pair.phi.grid(order);
  return sampled_functional(C, grid, sample_frame(z, grid), bump_value(pair.phi), bump_gradient(pair.phi));
}

double weak_residual(const CarnotGroup& G, const std::vector<PolyD>& z, const TestPair& pair) {
  return std::abs(weak_functional(G, z, pair));
}

double weak_residual(const CarnotGroup& G, const PolyVectorField& Z, const TestPair& pair) {
  return std::abs(weak_functional(G, Z, pair));
}

double weak_residual(const CarnotGroup& G, const FrameFunction& z, const TestPair& pair, int order) {
  return std::abs(weak_functional(G, z, pair, order));
}

double weak_functional(const CarnotGroup& G, const FrameFunction& z, const PolyForm& eta, const PolyForm& gamma,
                       const TestFunction& phi, int order, int panels) {
  const int n = G.dim();
  if (!is_vertical(G, eta)) throw PreconditionError("weak functional: eta is not vertical");
  std::vector<Rule1D> axes;
  for (int i = 0; i < n; ++i) axes.push_back(composite_gauss(order, panels, phi.lo[i], phi.hi[i]));
  const QuadratureGrid grid(axes);
  const auto C = compile(prepare(G, eta, gamma));
  return sampled_functional(C, grid, sample_frame(z, grid), phi.value, phi.gradient);
}

namespace {

void check_indices(const CarnotGroup& G, int t, int j) {
  const int d1 = G.algebra().layer_dim(1);
  if (t < d1 || t >= G.dim() || j < 0 || j >= d1) throw PreconditionError("coordinate weak functional: index out of range");
}

}  // namespace

double coordinate_weak_functional(const CarnotGroup& G, const std::vector<PolyD>& z, int t, int j,
                                  const PolyBump& phi) {
  check_indices(G, t, j);
  const int n = G.dim();
  double r = 0.0;
  if (!z[t].is_zero()) {
    for (int i = 0; i < n; ++i) {
      const auto& Xi = G.left_frame()[j][i];
      if (!Xi.is_zero()) r += integrate_against_partial(z[t] * Xi.cast<double>(), phi, i);
    }
  }
  for (int a = 0; a < n; ++a) {
    const Rational C = G.algebra().structure_constant(a, j, t);
    if (C != 0 && !z[a].is_zero()) r += to_double(C) * integrate_against(z[a], phi);
  }
  return r;
}

double coordinate_weak_functional(const CarnotGroup& G, const FrameFunction& z, int t, int j, const PolyBump& phi,
                                  int order) {
  check_indices(G, t, j);
  const int n = G.dim();
  std::vector<CompiledPolynomial> X;
  for (int i = 0; i < n; ++i) X.emplace_back(G.left_frame()[j][i]);
  std::vector<double> C(n);
  for (int a = 0; a < n; ++a) C[a] = to_double(G.algebra().structure_constant(a, j, t));
  const auto grid = phi.grid(order);
  const auto zs = sample_frame(z, grid);
  double total = 0.0;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.point(k, x.data());
    const double* zk = zs.data() + k * n;
    double Xphi = 0.0;
    for (int i = 0; i < n; ++i) {
      if (X[i].size()) Xphi += X[i](x.data()) * phi.partial(i, x.data());
    }
    double v = zk[t] * Xphi, s = 0.0;
    for (int a = 0; a < n; ++a) s += C[a] * zk[a];
    v += s * phi(x.data());
    total += grid.weight(k) * v;
  }
  return total;
}

double coordinate_weak_residual(const CarnotGroup& G, const std::vector<PolyD>& z, int l, int k, int j,
                                const PolyBump& phi) {
  const auto& A = G.algebra();
  if (l < 2 || l > G.step() || k < 0 || k >= A.layer_dim(l)) throw PreconditionError("coordinate_weak_residual: index out of range");
  return std::abs(coordinate_weak_functional(G, z, A.layer_offset(l) + k, j, phi));
}

int coordinate_sign(int j) { return j % 2 ? 1 : -1; }

WeakContactReport is_weak_contact(const CarnotGroup& G, const std::vector<PolyD>& z,
                                  const std::vector<TestPair>& family, double tol) {
  if (family.empty()) throw PreconditionError("is_weak_contact: empty test family");
  std::vector<double> values(family.size());
  for (std::size_t p = 0; p < family.size(); ++p) values[p] = weak_residual(G, z, family[p]);
  return finish(std::move(values), family, tol);
}

WeakContactReport is_weak_contact(const CarnotGroup& G, const PolyVectorField& Z,
                                  const std::vector<TestPair>& family, double tol) {
  return is_weak_contact(G, to_frame(G, Z), family, tol);
}

WeakContactReport is_weak_contact(const CarnotGroup& G, const FrameFunction& z, const std::vector<TestPair>& family,
                                  double tol, int order) {
  if (family.empty()) throw PreconditionError("is_weak_contact: empty test family");
  const auto groups = group_by_bump(family, order);
  std::vector<CompiledPrepared> prepared;
  for (const auto& pair : family) prepared.push_back(compile(prepare(G, pair)));
  std::vector<std::vector<double>> samples;
  for (const auto& g : groups) samples.push_back(sample_frame(z, g.grid));
  return sampled_report(G, family, groups, prepared, samples, tol);
}

std::string format_report(const WeakContactReport& r, bool machine) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific;
  if (machine) {
    for (std::size_t p = 0; p < r.residuals.size(); ++p) {
      os << "pair." << p << ".label=" << r.labels[p] << "\n";
      os << "pair." << p << ".residual=" << r.residuals[p] << "\n";
    }
    os << "pairs=" << r.residuals.size() << "\n";
    os << "max_residual=" << r.max_residual << "\n";
    os << "worst=" << (r.labels.empty() ? "" : r.labels[r.worst]) << "\n";
    os << "tol=" << r.tol << "\n";
    os << "verdict=" << (r.passed ? "pass" : "fail") << "\n";
    return os.str();
  }
  std::size_t width = 4;
  for (const auto& l : r.labels) width = std::max(width, l.size());
  os << std::left << std::setw(int(width) + 2) << "pair" << "residual\n";
  for (std::size_t p = 0; p < r.residuals.size(); ++p) {
    os << std::setw(int(width) + 2) << r.labels[p] << r.residuals[p] << "\n";
  }
  os << "max residual " << r.max_residual << " at " << (r.labels.empty() ? "-" : r.labels[r.worst]) << "\n";
  os << "tolerance    " << r.tol << "\n";
  os << (r.passed ? "weak contact: yes" : "weak contact: no") << "\n";
  return os.str();
}

StabilityReport verify_mollification_stability(const CarnotGroup& G, const PolyVectorField& Z, double eps,
                                               const std::vector<double>& lo, const std::vector<double>& hi,
                                               double tol) {
  StabilityReport rep;
  rep.eps = eps;
  rep.before = is_weak_contact(G, Z, default_test_family(G, lo, hi), tol);
  const Mollifier M(G, eps);
  const auto [slo, shi] = shrunk_box(M, lo, hi);
  rep.lo = slo;
  rep.hi = shi;
  rep.after = is_weak_contact(G, smooth_field(M, Z), default_test_family(G, slo, shi), tol);
  return rep;
}

namespace {

std::vector<std::vector<double>> probe_points(const std::vector<double>& lo, const std::vector<double>& hi, int per_axis) {
  const int n = int(lo.size());
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= per_axis;
  std::vector<std::vector<double>> pts;
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<double> x(n);
    std::size_t idx = k;
    for (int i = n - 1; i >= 0; --i) {
      x[i] = lo[i] + (hi[i] - lo[i]) * double(idx % per_axis) / (per_axis - 1);
      idx /= per_axis;
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

bool inside(const std::vector<double>& x, const std::vector<double>& lo, const std::vector<double>& hi) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> pushforward_box(const NumericMap& f, const std::vector<double>& lo,
                                                                    const std::vector<double>& hi) {
  const int n = f.n;
  std::vector<double> c(n), h(n);
  for (int i = 0; i < n; ++i) {
    c[i] = (lo[i] + hi[i]) / 2;
    h[i] = (hi[i] - lo[i]) / 2;
  }
  const auto fc = f(c);
  double s = 1.0;
  for (int attempt = 0; attempt < 16; ++attempt, s /= 2) {
    std::vector<double> tlo(n), thi(n);
    for (int i = 0; i < n; ++i) {
      tlo[i] = fc[i] - s * h[i];
      thi[i] = fc[i] + s * h[i];
    }
    bool ok = true;
    try {
      for (const auto& y : probe_points(tlo, thi, 5)) {
        if (!inside(f.apply_inverse(y), lo, hi)) {
          ok = false;
          break;
        }
      }
    } catch (const DomainError&) {
      ok = false;
    }
    if (ok) return {tlo, thi};
  }
  throw DomainError("verify_pushforward: no target box maps back into the source box");
}

std::vector<PushforwardReport> verify_pushforward(const CarnotGroup& G, const NumericMap& f,
                                                  const std::vector<PolyVectorField>& Z, const std::vector<double>& lo,
                                                  const std::vector<double>& hi, double tol, int order) {
  const int n = G.dim();
  if (f.n != n) throw DimensionMismatch("verify_pushforward: map dimension");
  std::vector<double> mlo(n), mhi(n);
  for (int i = 0; i < n; ++i) {
    const double c = (lo[i] + hi[i]) / 2, h = (hi[i] - lo[i]) / 4;
    mlo[i] = c - h;
    mhi[i] = c + h;
  }
  double defect = 0.0;
  for (const auto& x : probe_points(mlo, mhi, 3)) {
    defect = std::max(defect, horizontality_defect(G, f, x));
    const auto J = f.differential(x);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Jm(J.data(), n, n);
    if (!(Jm.determinant() > 0.0)) throw PreconditionError("verify_pushforward: Df does not preserve orientation");
  }
  if (defect > 1e-6) {
    std::ostringstream os;
    os << "verify_pushforward: " << f.label << " is not contact (horizontality defect " << defect << ")";
    throw PreconditionError(os.str());
  }
  const auto [tlo, thi] = pushforward_box(f, lo, hi);
  const auto family = default_test_family(G, tlo, thi);
  const auto groups = group_by_bump(family, order);
  std::vector<CompiledPrepared> prepared;
  for (const auto& pair : family) prepared.push_back(compile(prepare(G, pair)));

  std::vector<std::vector<CompiledPolynomial>> zc;
  for (const auto& Zk : Z) {
    std::vector<CompiledPolynomial> c;
    for (int i = 0; i < n; ++i) c.emplace_back(Zk[i]);
    zc.push_back(std::move(c));
  }
  std::vector<CompiledPolynomial> minv;
  for (const auto& row : G.coframe_matrix()) {
    for (const auto& c : row) minv.emplace_back(c);
  }
  // samples[k][g]: frame coefficients of f_* Z_k at the nodes of group g.
  std::vector<std::vector<std::vector<double>>> samples(Z.size(), std::vector<std::vector<double>>(groups.size()));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& grid = groups[g].grid;
    const long N = long(grid.size());
    for (auto& s : samples) s[g].assign(grid.size() * n, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (long node = 0; node < N; ++node) {
      std::vector<double> y(n), x(n), J(n * n), M(n * n), v(n), w(n);
      grid.point(std::size_t(node), y.data());
      f.inverse(y.data(), x.data());
      f.jacobian(x.data(), J.data());
      for (int i = 0; i < n * n; ++i) M[i] = minv[i].size() ? minv[i](y.data()) : 0.0;
      for (std::size_t k = 0; k < Z.size(); ++k) {
        for (int i = 0; i < n; ++i) v[i] = zc[k][i](x.data());
        for (int i = 0; i < n; ++i) {
          double s = 0.0;
          for (int j = 0; j < n; ++j) s += J[i * n + j] * v[j];
          w[i] = s;
        }
        double* out = samples[k][g].data() + std::size_t(node) * n;
        for (int a = 0; a < n; ++a) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) s += M[a * n + i] * w[i];
          out[a] = s;
        }
      }
    }
  }
  std::vector<PushforwardReport> out;
  for (std::size_t k = 0; k < Z.size(); ++k) {
    PushforwardReport r;
    r.report = sampled_report(G, family, groups, prepared, samples[k], tol);
    r.lo = tlo;
    r.hi = thi;
    r.horizontality_defect = defect;
    out.push_back(std::move(r));
  }
  return out;
}

PushforwardReport verify_pushforward(const CarnotGroup& G, const NumericMap& f, const PolyVectorField& Z,
                                     const std::vector<double>& lo, const std::vector<double>& hi, double tol,
                                     int order) {
  return verify_pushforward(G, f, std::vector<PolyVectorField>{Z}, lo, hi, tol, order).front();
}

}  // namespace carnot
