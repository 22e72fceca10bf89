#include "carnot/group.hpp"

#include <cmath>
#include <numeric>

namespace carnot {

namespace {

Rational factorial(int k) {
  Rational f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void dynkin_blocks(int depth, int k, std::vector<int>& word, Rational denom, int blocks,
                   std::map<std::vector<int>, Rational>& out) {
  if (blocks == k) {
    const int m = int(word.size());
    if (m >= 2 && word[m - 1] == word[m - 2]) return;
    Rational c = Rational(k % 2 ? 1 : -1) / (denom * k * m);
    out[word] += c;
    return;
  }
  const int room = depth - int(word.size());
  for (int r = 0; r <= room; ++r) {
    for (int s = 0; r + s <= room; ++s) {
      if (r + s == 0) continue;
      // remaining blocks need at least one letter each
      if (int(word.size()) + r + s + (k - blocks - 1) > depth) continue;
      const std::size_t keep = word.size();
      word.insert(word.end(), r, 0);
      word.insert(word.end(), s, 1);
      dynkin_blocks(depth, k, word, denom * factorial(r) * factorial(s), blocks + 1, out);
      word.resize(keep);
    }
  }
}

// Keeps the terms of a 2n-variable polynomial free of the dropped block and
// re-indexes the kept block to variables 0..n-1.
Poly restrict_block(const Poly& p, int n, int keep_offset) {
  const int drop_offset = keep_offset == 0 ? n : 0;
  Poly r(n);
  for (const auto& [m, c] : p.terms()) {
    bool free = true;
    for (int i = 0; i < n; ++i) free = free && m[drop_offset + i] == 0;
    if (!free) continue;
    Monomial e(n);
    for (int i = 0; i < n; ++i) e[i] = m[keep_offset + i];
    r.add_term(e, c);
  }
  return r;
}

using PolyMatrix = std::vector<std::vector<Poly>>;

PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b, int n) {
  PolyMatrix r(n, std::vector<Poly>(n, Poly(n)));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        if (!b[k][j].is_zero()) r[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return r;
}

std::vector<Poly> variables(int n) {
  std::vector<Poly> v;
  for (int i = 0; i < n; ++i) v.push_back(Poly::variable(n, i));
  return v;
}

}  // namespace

std::map<std::vector<int>, Rational> dynkin_coefficients(int depth) {
  std::map<std::vector<int>, Rational> out;
  std::vector<int> word;
  for (int k = 1; k <= depth; ++k) dynkin_blocks(depth, k, word, Rational(1), 0, out);
  for (auto it = out.begin(); it != out.end();) it = is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> PolyMap::evaluate(std::span<const double> x) const {
  std::vector<double> r(comp.size());
  for (std::size_t i = 0; i < comp.size(); ++i) r[i] = comp[i].evaluate<double>(x);
  return r;
}

std::vector<Rational> PolyMap::evaluate(const std::vector<Rational>& x) const {
  std::vector<Rational> r(comp.size());
  for (std::size_t i = 0; i < comp.size(); ++i) r[i] = comp[i].evaluate<Rational>(x);
  return r;
}

std::vector<std::vector<Poly>> PolyMap::jacobian() const {
  std::vector<std::vector<Poly>> J;
  for (const auto& c : comp) {
    std::vector<Poly> row;
    for (std::size_t j = 0; j < c.nvars(); ++j) row.push_back(c.derivative(j));
    J.push_back(std::move(row));
  }
  return J;
}

PolyMap PolyMap::inverse_map() const {
  if (!inverse) throw PreconditionError("map '" + label + "' carries no polynomial inverse");
  return PolyMap{*inverse, comp, label + "^-1"};
}

PolyMap identity_map(int n) { return PolyMap{variables(n), variables(n), "id"}; }

PolyMap compose(const PolyMap& F, const PolyMap& G) {
  PolyMap r;
  r.label = F.label + "@" + G.label;
  for (const auto& c : F.comp) r.comp.push_back(c.compose(G.comp));
  if (F.inverse && G.inverse) {
    std::vector<Poly> inv;
    for (const auto& c : *G.inverse) inv.push_back(c.compose(*F.inverse));
    r.inverse = std::move(inv);
  }
  return r;
}

Poly determinant(const std::vector<std::vector<Poly>>& M) {
  const int n = int(M.size());
  if (n == 0) return Poly::constant(0, Rational(1));
  if (n > 20) throw PreconditionError("determinant: matrix too large");
  const std::size_t nv = M[0][0].nvars();
  // dp[mask]: signed sum over placements of the first popcount(mask) rows into columns mask
  std::vector<Poly> dp(std::size_t(1) << n, Poly(nv));
  std::vector<bool> live(dp.size(), false);
  dp[0] = Poly::constant(nv, Rational(1));
  live[0] = true;
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (!live[mask] || dp[mask].is_zero()) continue;
    const int row = std::popcount(mask);
    if (row == n) continue;
    for (int c = 0; c < n; ++c) {
      if (mask & (std::size_t(1) << c)) continue;
      if (M[row][c].is_zero()) continue;
      Poly t = dp[mask] * M[row][c];
      if (std::popcount(mask >> (c + 1)) % 2) t *= Rational(-1);
      dp[mask | (std::size_t(1) << c)] += t;
      live[mask | (std::size_t(1) << c)] = true;
    }
  }
  return dp.back();
}

PolyVectorField pushforward(const PolyMap& F, const PolyVectorField& Z) {
  if (!F.inverse) throw PreconditionError("pushforward needs a map with polynomial inverse ('" + F.label + "')");
  const int n = Z.dim();
  const auto J = F.jacobian();
  PolyVectorField r(n);
  for (int i = 0; i < n; ++i) {
    Poly acc(n);
    for (int j = 0; j < n; ++j) {
      if (!J[i][j].is_zero() && !Z[j].is_zero()) acc += J[i][j] * Z[j];
    }
    r[i] = acc.compose(*F.inverse);
  }
  return r;
}

PolyForm pullback(const PolyMap& F, const PolyForm& w) {
  const int n = w.dim();
  const auto J = F.jacobian();
  std::vector<PolyForm> images;
  for (int i = 0; i < n; ++i) images.push_back(PolyForm::one_form(n, J[i]));
  return substitute<Poly>(w, images, [&](const Poly& c) { return c.compose(F.comp); });
}

// ---------------------------------------------------------------------------

CarnotGroup::CarnotGroup(StratifiedLieAlgebra A) : A_(std::move(A)) {
  const int n = A_.dim();
  const int s = A_.step();
  std::vector<Poly> xs, ys;
  for (int i = 0; i < n; ++i) {
    xs.push_back(Poly::variable(2 * n, i));
    ys.push_back(Poly::variable(2 * n, n + i));
  }
  law_ = bch(A_, xs, ys);
  for (const auto& p : law_) law_c_.emplace_back(p);

  for (int i = 0; i < n; ++i) {
    PolyVectorField L(n), R(n);
    for (int j = 0; j < n; ++j) {
      L[j] = restrict_block(law_[j].derivative(n + i), n, 0);
      R[j] = restrict_block(law_[j].derivative(i), n, n);
    }
    left_.push_back(std::move(L));
    right_.push_back(std::move(R));
  }

  M_.assign(n, std::vector<Poly>(n, Poly(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M_[j][i] = left_[i][j];
  }
  // M = I + N with N nilpotent: M^{-1} = sum_k (-N)^k
  PolyMatrix negN = M_;
  for (int i = 0; i < n; ++i) {
    negN[i][i] -= Poly::constant(n, Rational(1));
    for (int j = 0; j < n; ++j) negN[i][j] *= Rational(-1);
  }
  PolyMatrix power(n, std::vector<Poly>(n, Poly(n)));
  for (int i = 0; i < n; ++i) power[i][i] = Poly::constant(n, Rational(1));
  Minv_ = power;
  for (int k = 1; k <= n; ++k) {
    power = matmul(power, negN, n);
    bool zero = true;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (power[i][j].is_zero()) continue;
        zero = false;
        Minv_[i][j] += power[i][j];
      }
    }
    if (zero) break;
  }
  for (int i = 0; i < n; ++i) coframe_.push_back(PolyForm::one_form(n, Minv_[i]));
  for (int j = 0; j < n; ++j) dx_in_sigma_.push_back(PolyForm::one_form(n, M_[j]));

  int f = 1;
  for (int k = 2; k <= s; ++k) f *= k;
  gauge_exp_ = 2 * f;
}

std::vector<Rational> CarnotGroup::product(const std::vector<Rational>& x, const std::vector<Rational>& y) const {
  return bch(A_, x, y);
}

std::vector<double> CarnotGroup::product(std::span<const double> x, std::span<const double> y) const {
  const int n = dim();
  double xy[64];
  std::copy(x.begin(), x.end(), xy);
  std::copy(y.begin(), y.end(), xy + n);
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = law_c_[i](xy);
  return r;
}

void CarnotGroup::product(const double* x, const double* y, double* out) const {
  const int n = dim();
  double xy[64];
  std::copy(x, x + n, xy);
  std::copy(y, y + n, xy + n);
  for (int i = 0; i < n; ++i) out[i] = law_c_[i](xy);
}

PolyMap CarnotGroup::left_translation(const std::vector<Rational>& a) const {
  const int n = dim();
  if (int(a.size()) != n) throw DimensionMismatch("left_translation: wrong point length");
  auto build = [&](const std::vector<Rational>& p) {
    std::vector<Poly> subs;
    for (int i = 0; i < n; ++i) subs.push_back(Poly::constant(n, p[i]));
    for (int i = 0; i < n; ++i) subs.push_back(Poly::variable(n, i));
    std::vector<Poly> out;
    for (const auto& c : law_) out.push_back(c.compose(subs));
    return out;
  };
  return PolyMap{build(a), build(inverse(a)), "left"};
}

PolyMap CarnotGroup::right_translation(const std::vector<Rational>& a) const {
  const int n = dim();
  if (int(a.size()) != n) throw DimensionMismatch("right_translation: wrong point length");
  auto build = [&](const std::vector<Rational>& p) {
    std::vector<Poly> subs;
    for (int i = 0; i < n; ++i) subs.push_back(Poly::variable(n, i));
    for (int i = 0; i < n; ++i) subs.push_back(Poly::constant(n, p[i]));
    std::vector<Poly> out;
    for (const auto& c : law_) out.push_back(c.compose(subs));
    return out;
  };
  return PolyMap{build(a), build(inverse(a)), "right"};
}

PolyMap CarnotGroup::dilation(const Rational& t) const {
  if (sgn(t) <= 0) throw PreconditionError("dilation parameter must be positive");
  const int n = dim();
  PolyMap F{{}, std::vector<Poly>{}, "dilation"};
  for (int i = 0; i < n; ++i) {
    Rational f = 1, g = 1;
    for (int k = 0; k < weights()[i]; ++k) {
      f *= t;
      g /= t;
    }
    F.comp.push_back(Poly::variable(n, i) * f);
    F.inverse->push_back(Poly::variable(n, i) * g);
  }
  return F;
}

std::vector<Poly> CarnotGroup::frame_coefficients(const PolyVectorField& Z) const {
  const int n = dim();
  std::vector<Poly> z(n, Poly(n));
  for (int a = 0; a < n; ++a) {
    for (int j = 0; j < n; ++j) {
      if (!Minv_[a][j].is_zero() && !Z[j].is_zero()) z[a] += Minv_[a][j] * Z[j];
    }
  }
  return z;
}

PolyVectorField CarnotGroup::from_frame_coefficients(const std::vector<Poly>& z) const {
  const int n = dim();
  PolyVectorField Z(n);
  for (int a = 0; a < n; ++a) {
    if (z.at(a).is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      if (!M_[j][a].is_zero()) Z[j] += M_[j][a] * z[a];
    }
  }
  return Z;
}

PolyForm CarnotGroup::to_coframe_basis(const PolyForm& w) const {
  return substitute<Poly>(w, dx_in_sigma_, [](const Poly& c) { return c; });
}

PolyForm CarnotGroup::from_coframe_basis(const PolyForm& w) const {
  return substitute<Poly>(w, coframe_, [](const Poly& c) { return c; });
}

PolyForm CarnotGroup::coframe_monomial(FormKey k) const {
  return from_coframe_basis(constant_form(dim(), k));
}

PolyVectorField CarnotGroup::dilation_generator() const {
  const int n = dim();
  PolyVectorField Z(n);
  for (int i = 0; i < n; ++i) Z[i] = Poly::variable(n, i) * Rational(weights()[i]);
  return Z;
}

double CarnotGroup::gauge(std::span<const double> x) const {
  double acc = 0.0;
  for (int i = 0; i < dim(); ++i) acc += std::pow(std::abs(x[i]), double(gauge_exp_) / weights()[i]);
  return std::pow(acc, 1.0 / gauge_exp_);
}

double CarnotGroup::gauge_distance(std::span<const double> x, std::span<const double> y) const {
  std::vector<double> xi(x.begin(), x.end());
  for (auto& v : xi) v = -v;
  return gauge(product(xi, y));
}

}  // namespace carnot
