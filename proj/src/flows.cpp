#include "carnot/flows.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <memory>
#include <sstream>

namespace carnot {

namespace ode = boost::numeric::odeint;
using State = std::vector<double>;

std::vector<double> NumericMap::operator()(std::span<const double> x) const {
  std::vector<double> y(n);
  forward(x.data(), y.data());
  return y;
}

std::vector<double> NumericMap::apply_inverse(std::span<const double> y) const {
  std::vector<double> x(n);
  inverse(y.data(), x.data());
  return x;
}

std::vector<double> NumericMap::differential(std::span<const double> x) const {
  std::vector<double> J(n * n);
  jacobian(x.data(), J.data());
  return J;
}

NumericMap identity_numeric(int n) {
  NumericMap f;
  f.n = n;
  f.forward = [n](const double* x, double* y) { std::copy(x, x + n, y); };
  f.inverse = f.forward;
  f.jacobian = [n](const double*, double* J) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) J[i * n + j] = i == j ? 1.0 : 0.0;
    }
  };
  f.label = "identity";
  return f;
}

NumericMap numeric_map(const PolyMap& F) {
  if (!F.inverse) throw PreconditionError("numeric_map: the polynomial map carries no inverse");
  const int n = F.dim();
  auto compile = [](const std::vector<Poly>& ps) {
    std::vector<CompiledPolynomial> out;
    for (const auto& p : ps) out.emplace_back(p);
    return out;
  };
  auto fwd = std::make_shared<std::vector<CompiledPolynomial>>(compile(F.comp));
  auto inv = std::make_shared<std::vector<CompiledPolynomial>>(compile(*F.inverse));
  auto jac = std::make_shared<std::vector<CompiledPolynomial>>();
  for (const auto& row : F.jacobian()) {
    for (const auto& c : row) jac->emplace_back(c);
  }
  NumericMap f;
  f.n = n;
  f.forward = [fwd, n](const double* x, double* y) {
    for (int i = 0; i < n; ++i) y[i] = (*fwd)[i](x);
  };
  f.inverse = [inv, n](const double* x, double* y) {
    for (int i = 0; i < n; ++i) y[i] = (*inv)[i](x);
  };
  f.jacobian = [jac, n](const double* x, double* J) {
    for (int i = 0; i < n * n; ++i) J[i] = (*jac)[i](x);
  };
  f.label = F.label;
  return f;
}

NumericMap compose(const NumericMap& f, const NumericMap& g) {
  if (f.n != g.n) throw DimensionMismatch("compose: dimension mismatch");
  const int n = f.n;
  NumericMap h;
  h.n = n;
  h.forward = [f, g, n](const double* x, double* y) {
    std::vector<double> m(n);
    g.forward(x, m.data());
    f.forward(m.data(), y);
  };
  h.inverse = [f, g, n](const double* y, double* x) {
    std::vector<double> m(n);
    f.inverse(y, m.data());
    g.inverse(m.data(), x);
  };
  h.jacobian = [f, g, n](const double* x, double* J) {
    std::vector<double> m(n), Jf(n * n), Jg(n * n);
    g.forward(x, m.data());
    f.jacobian(m.data(), Jf.data());
    g.jacobian(x, Jg.data());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += Jf[i * n + k] * Jg[k * n + j];
        J[i * n + j] = s;
      }
    }
  };
  h.label = f.label + "@" + g.label;
  return h;
}

namespace {

std::vector<double> central_difference(const VectorFunction& f, int n, const double* x, double h) {
  std::vector<double> J(n * n), xp(x, x + n), xm(x, x + n), fp(n), fm(n);
  for (int j = 0; j < n; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    f(xp.data(), fp.data());
    f(xm.data(), fm.data());
    for (int i = 0; i < n; ++i) J[i * n + j] = (fp[i] - fm[i]) / (2 * h);
    xp[j] = xm[j] = x[j];
  }
  return J;
}

}  // namespace

std::vector<double> fd_jacobian(const VectorFunction& f, int n, const double* x, double h, double* gap) {
  const auto a = central_difference(f, n, x, h);
  const auto b = central_difference(f, n, x, h / 2);
  std::vector<double> r(n * n);
  double g = 0.0;
  for (int i = 0; i < n * n; ++i) {
    r[i] = (4 * b[i] - a[i]) / 3;
    g = std::max(g, std::abs(b[i] - a[i]));
  }
  if (gap) *gap = g;
  return r;
}

FlowSpec flow_spec(const PolyVectorField& Z, const std::string& label) {
  const int n = Z.dim();
  auto comp = std::make_shared<std::vector<CompiledPolynomial>>();
  auto jac = std::make_shared<std::vector<CompiledPolynomial>>();
  for (int i = 0; i < n; ++i) {
    comp->emplace_back(Z[i]);
    for (int j = 0; j < n; ++j) jac->emplace_back(Z[i].derivative(j));
  }
  FlowSpec s;
  s.n = n;
  s.field = [comp, n](const double* x, double* out) {
    for (int i = 0; i < n; ++i) out[i] = (*comp)[i](x);
  };
  s.field_jacobian = [jac, n](const double* x, double* J) {
    for (int i = 0; i < n * n; ++i) J[i] = (*jac)[i](x);
  };
  s.label = label;
  return s;
}

FlowSpec flow_spec(const CarnotGroup& G, const std::vector<PolyD>& z, const std::string& label) {
  const int n = G.dim();
  std::vector<PolyD> comp(n, PolyD(n));
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) {
      const auto& c = G.left_frame()[a][i];
      if (!c.is_zero()) comp[i] += z[a] * c.cast<double>();
    }
  }
  auto cc = std::make_shared<std::vector<CompiledPolynomial>>();
  auto jac = std::make_shared<std::vector<CompiledPolynomial>>();
  for (int i = 0; i < n; ++i) {
    cc->emplace_back(comp[i]);
    for (int j = 0; j < n; ++j) jac->emplace_back(comp[i].derivative(j));
  }
  FlowSpec s;
  s.n = n;
  s.field = [cc, n](const double* x, double* out) {
    for (int i = 0; i < n; ++i) out[i] = (*cc)[i](x);
  };
  s.field_jacobian = [jac, n](const double* x, double* J) {
    for (int i = 0; i < n * n; ++i) J[i] = (*jac)[i](x);
  };
  s.label = label;
  return s;
}

namespace {

constexpr long kMaxSteps = 200000;

template <class System>
void integrate(const FlowSpec& Z, System sys, State& state, double t) {
  if (t == 0.0) return;
  if (!std::isfinite(t)) throw DomainError("flow: non-finite time (" + Z.label + ")");
  auto stepper = ode::make_dense_output(Z.atol, Z.rtol, ode::runge_kutta_dopri5<State>());
  long steps = 0;
  auto observer = [&](const State& s, double) {
    if (++steps > kMaxSteps) throw DomainError("flow: step-size underflow (" + Z.label + ")");
    for (int i = 0; i < Z.n; ++i) {
      if (!std::isfinite(s[i])) throw DomainError("flow: trajectory diverged (" + Z.label + ")");
      if (Z.box && (s[i] < Z.box->first[i] || s[i] > Z.box->second[i])) {
        throw DomainError("flow: trajectory exits the box (" + Z.label + ")");
      }
    }
  };
  // explicit stepping: odeint's integrate_adaptive can stall on fields with zero error estimates
  stepper.initialize(state, 0.0, t / 16);
  observer(state, 0.0);
  const double dir = t > 0 ? 1.0 : -1.0;
  while (dir * (t - stepper.current_time()) > 0.0) {
    stepper.do_step(sys);
    observer(stepper.current_state(), stepper.current_time());
  }
  stepper.calc_state(t, state);
  observer(state, t);
}

}  // namespace

std::vector<double> flow(const FlowSpec& Z, std::span<const double> x, double t) {
  if (int(x.size()) != Z.n) throw DimensionMismatch("flow: wrong point length");
  State state(x.begin(), x.end());
  integrate(
      Z, [&Z](const State& s, State& ds, double) { Z.field(s.data(), ds.data()); }, state, t);
  return state;
}

std::pair<std::vector<double>, std::vector<double>> flow_with_jacobian(const FlowSpec& Z, std::span<const double> x,
                                                                       double t) {
  const int n = Z.n;
  if (int(x.size()) != n) throw DimensionMismatch("flow_with_jacobian: wrong point length");
  State state(n + n * n, 0.0);
  std::copy(x.begin(), x.end(), state.begin());
  for (int i = 0; i < n; ++i) state[n + i * n + i] = 1.0;
  std::vector<double> DZ(n * n);
  auto sys = [&](const State& s, State& ds, double) {
    Z.field(s.data(), ds.data());
    if (Z.field_jacobian) {
      (*Z.field_jacobian)(s.data(), DZ.data());
    } else {
      DZ = fd_jacobian(Z.field, n, s.data());
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += DZ[i * n + k] * s[n + k * n + j];
        ds[n + i * n + j] = acc;
      }
    }
  };
  integrate(Z, sys, state, t);
  return {std::vector<double>(state.begin(), state.begin() + n), std::vector<double>(state.begin() + n, state.end())};
}

NumericMap flow_map(const FlowSpec& Z, double t) {
  NumericMap f;
  f.n = Z.n;
  const int n = Z.n;
  f.forward = [Z, t, n](const double* x, double* y) {
    const auto r = flow(Z, std::span<const double>(x, n), t);
    std::copy(r.begin(), r.end(), y);
  };
  f.inverse = [Z, t, n](const double* y, double* x) {
    const auto r = flow(Z, std::span<const double>(y, n), -t);
    std::copy(r.begin(), r.end(), x);
  };
  f.jacobian = [Z, t, n](const double* x, double* J) {
    const auto r = flow_with_jacobian(Z, std::span<const double>(x, n), t).second;
    std::copy(r.begin(), r.end(), J);
  };
  std::ostringstream os;
  os << "flow(" << Z.label << "," << t << ")";
  f.label = os.str();
  return f;
}

VectorFunction pushforward_field(const NumericMap& f, const VectorFunction& Z) {
  const int n = f.n;
  return [f, Z, n](const double* y, double* out) {
    std::vector<double> x(n), J(n * n), z(n);
    f.inverse(y, x.data());
    f.jacobian(x.data(), J.data());
    Z(x.data(), z.data());
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += J[i * n + k] * z[k];
      out[i] = acc;
    }
  };
}

FlowSpec pushforward_spec(const NumericMap& f, const FlowSpec& Z) {
  FlowSpec s;
  s.n = Z.n;
  s.field = pushforward_field(f, Z.field);
  s.rtol = Z.rtol;
  s.atol = Z.atol;
  s.label = f.label + "_*" + Z.label;
  return s;
}

double horizontality_defect(const CarnotGroup& G, const NumericMap& f, std::span<const double> x) {
  const int n = G.dim();
  const auto J = f.differential(x);
  const auto y = f(x);
  double worst = 0.0;
  for (int j = 0; j < G.algebra().layer_dim(1); ++j) {
    const auto Xj = G.left_frame()[j].evaluate(x);
    std::vector<double> v(n, 0.0), c(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) v[i] += J[i * n + k] * Xj[k];
    }
    double scale = 0.0, vertical = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int i = 0; i < n; ++i) c[a] += G.coframe_matrix()[a][i].evaluate<double>(y) * v[i];
      scale = std::max(scale, std::abs(c[a]));
      if (G.weights()[a] >= 2) vertical = std::max(vertical, std::abs(c[a]));
    }
    if (scale > 0.0) worst = std::max(worst, vertical / scale);
  }
  return worst;
}

FlowChart::FlowChart(std::vector<FlowSpec> fields, std::vector<double> p) : fields_(std::move(fields)), p_(std::move(p)) {
  if (int(fields_.size()) != int(p_.size())) throw DimensionMismatch("FlowChart: need n fields");
  const std::vector<double> zero(p_.size(), 0.0);
  j0_ = jacobian(zero);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> J(j0_.data(), dim(), dim());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
  if (lu.rank() < dim()) throw PreconditionError("FlowChart: the fields are dependent at the base point");
}

std::vector<double> FlowChart::forward(std::span<const double> t) const {
  if (int(t.size()) != dim()) throw DimensionMismatch("FlowChart: wrong parameter length");
  std::vector<double> q = p_;
  for (int i = dim() - 1; i >= 0; --i) {
    if (t[i] != 0.0) q = flow(fields_[i], q, t[i]);
  }
  return q;
}

std::vector<double> FlowChart::jacobian(std::span<const double> t) const {
  const int n = dim();
  const double h = 1e-6;
  std::vector<double> J(n * n), tp(t.begin(), t.end()), tm(t.begin(), t.end());
  for (int j = 0; j < n; ++j) {
    tp[j] = t[j] + h;
    tm[j] = t[j] - h;
    const auto fp = forward(tp), fm = forward(tm);
    for (int i = 0; i < n; ++i) J[i * n + j] = (fp[i] - fm[i]) / (2 * h);
    tp[j] = tm[j] = t[j];
  }
  return J;
}

std::vector<double> FlowChart::inverse(std::span<const double> q, double tol) const {
  const int n = dim();
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  std::vector<double> t(n, 0.0);
  auto residual = [&](const std::vector<double>& s, Eigen::VectorXd& F) {
    const auto x = forward(s);
    F.resize(n);
    for (int i = 0; i < n; ++i) F[i] = x[i] - q[i];
    return F.norm();
  };
  Eigen::VectorXd F;
  double r = residual(t, F);
  Mat J = Eigen::Map<const Mat>(j0_.data(), n, n);
  bool fresh = false;
  for (int it = 0; it < 60 && r > tol; ++it) {
    const Eigen::VectorXd d = J.partialPivLu().solve(-F);
    if (!d.allFinite()) break;
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls, lambda /= 2) {
      std::vector<double> trial(n);
      for (int i = 0; i < n; ++i) trial[i] = t[i] + lambda * d[i];
      Eigen::VectorXd Ft;
      double rt = INFINITY;
      try {
        rt = residual(trial, Ft);
      } catch (const DomainError&) {
        continue;
      }
      if (rt < r) {
        t = trial;
        F = Ft;
        r = rt;
        improved = true;
        break;
      }
    }
    if (!improved) {
      if (fresh) break;
      const auto Jt = jacobian(t);
      J = Eigen::Map<const Mat>(Jt.data(), n, n);
      fresh = true;
      continue;
    }
    fresh = false;
    if (d.norm() * lambda < 1e-15) break;
  }
  if (!(r <= std::max(tol, 1e-9))) throw DomainError("FlowChart: Newton iteration diverged (point outside the chart image?)");
  return t;
}

double FlowChart::valid_radius() const {
  const int n = dim();
  for (double r = 1.0 / 64; r <= 4.0; r *= 2) {
    for (int i = 0; i < n; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        std::vector<double> t(n, 0.0);
        t[i] = sgn * r;
        double cond = 0.0;
        try {
          const auto Jt = jacobian(t);
          Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> J(Jt.data(), n, n);
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
          const auto& sv = svd.singularValues();
          cond = sv[n - 1] > 0.0 ? sv[0] / sv[n - 1] : INFINITY;
        } catch (const DomainError&) {
          cond = INFINITY;
        }
        if (!(cond <= 1e3)) return r / 2;
      }
    }
  }
  return 2.0;
}

double verify_conjugacy(const CarnotGroup& G, const NumericMap& f, const FlowSpec& Z, std::span<const double> x,
                        double t) {
  const auto fx = f(x);
  const auto lhs = flow(pushforward_spec(f, Z), fx, t);
  const auto rhs = f(flow(Z, x, t));
  if (int(lhs.size()) != G.dim()) throw DimensionMismatch("verify_conjugacy: map dimension");
  double d = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) d = std::max(d, std::abs(lhs[i] - rhs[i]));
  return d;
}

ChartReport verify_identity_in_chart(const NumericMap& f, std::span<const double> p, const std::vector<FlowSpec>& X,
                                     double radius, int per_axis) {
  const int n = f.n;
  if (int(X.size()) != n || int(p.size()) != n) throw DimensionMismatch("verify_identity_in_chart: need n fields");
  if (per_axis < 2) throw PreconditionError("verify_identity_in_chart: need at least two points per axis");
  std::vector<FlowSpec> pushed;
  for (const auto& Xi : X) pushed.push_back(pushforward_spec(f, Xi));
  const FlowChart phi(X, std::vector<double>(p.begin(), p.end()));
  const FlowChart psi(pushed, f(p));
  ChartReport rep;
  rep.radius = radius;
  rep.valid_radius = phi.valid_radius();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= per_axis;
  std::vector<double> t(n);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t idx = k;
    for (int i = n - 1; i >= 0; --i) {
      t[i] = -radius + 2 * radius * double(idx % per_axis) / (per_axis - 1);
      idx /= per_axis;
    }
    const auto s = psi.inverse(f(phi.forward(t)));
    for (int i = 0; i < n; ++i) rep.max_error = std::max(rep.max_error, std::abs(s[i] - t[i]));
    ++rep.points;
  }
  return rep;
}

}  // namespace carnot
