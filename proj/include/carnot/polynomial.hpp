#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

/// Exponent multi-index of a monomial; its length is the number of variables.
using Monomial = std::vector<std::uint16_t>;

inline int total_degree(const Monomial& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

/// Weighted degree with variable i carrying weight `weights[i]`.
inline int weighted_degree(const Monomial& m, std::span<const int> weights) {
  int d = 0;
  for (std::size_t i = 0; i < m.size(); ++i) d += weights[i] * m[i];
  return d;
}

/// Graded-lex order on weighted degree, ties broken by plain lex.
struct WeightedMonomialLess {
  std::span<const int> weights;
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = weighted_degree(a, weights);
    const int db = weighted_degree(b, weights);
    if (da != db) return da < db;
    return a > b;  // x1 before x2 within a degree
  }
};

/// All monomials in `weights.size()` variables of weighted degree exactly `degree`,
/// sorted by WeightedMonomialLess.
std::vector<Monomial> monomials_of_weighted_degree(std::span<const int> weights, int degree);

/// Sparse multivariate polynomial with coefficients in T (Rational or double).
/// Zero coefficients are never stored.
template <class T>
class Polynomial {
 public:
  using Terms = std::map<Monomial, T>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const T& c) {
    Polynomial p(nvars);
    if (!carnot::is_zero(c)) p.terms_.emplace(Monomial(nvars, 0), c);
    return p;
  }
  static Polynomial variable(std::size_t nvars, std::size_t i) {
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m[i] = 1;
    p.terms_.emplace(std::move(m), T(1));
    return p;
  }
  static Polynomial monomial(const Monomial& m, const T& c) {
    Polynomial p(m.size());
    if (!carnot::is_zero(c)) p.terms_.emplace(m, c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  T coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? T(0) : it->second;
  }

  void add_term(const Monomial& m, const T& c) {
    if (carnot::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (carnot::is_zero(it->second)) terms_.erase(it);
    }
  }

  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }
  int weighted_degree(std::span<const int> w) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, carnot::weighted_degree(m, w));
    return d;
  }
  /// Largest exponent of variable i (-1 for the zero polynomial).
  int degree_in(std::size_t i) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, int(m[i]));
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, T(-c));
    return *this;
  }
  Polynomial& operator*=(const T& s) {
    if (carnot::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= T(-1); }
  friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
  friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial r(a.nvars_);
    Monomial m(a.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, T(ca * cb));
      }
    }
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Polynomial derivative(std::size_t i) const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m[i] == 0) continue;
      Monomial d = m;
      --d[i];
      r.add_term(d, T(c * T(int(m[i]))));
    }
    return r;
  }

  /// Evaluates at a point whose entries are of type U (T must convert to U).
  template <class U>
  U evaluate(std::span<const U> x) const {
    U acc(0);
    for (const auto& [m, c] : terms_) {
      U t = convert<U>(c);
      for (std::size_t i = 0; i < nvars_; ++i) {
        for (int k = 0; k < m[i]; ++k) t *= x[i];
      }
      acc += t;
    }
    return acc;
  }
  template <class U>
  U evaluate(const std::vector<U>& x) const {
    return evaluate<U>(std::span<const U>(x));
  }

  /// Substitutes variable i by subs[i]; all substitutes share one variable count.
  Polynomial compose(const std::vector<Polynomial>& subs) const;

  /// Re-embeds into `nvars` variables, variable i becoming variable offset + i.
  Polynomial embed(std::size_t nvars, std::size_t offset) const {
    Polynomial r(nvars);
    for (const auto& [m, c] : terms_) {
      Monomial e(nvars, 0);
      for (std::size_t i = 0; i < nvars_; ++i) e[offset + i] = m[i];
      r.terms_.emplace(std::move(e), c);
    }
    return r;
  }

  template <class U = T>
  Polynomial<U> cast() const {
    Polynomial<U> r(nvars_);
    for (const auto& [m, c] : terms_) r.add_term(m, convert<U>(c));
    return r;
  }

  /// Drops terms whose |coefficient| is at most tol (double polynomials only).
  Polynomial pruned(double tol) const {
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (std::abs(to_double(c)) > tol) r.terms_.emplace(m, c);
    }
    return r;
  }

 private:
  template <class U, class V>
  static U convert(const V& v) {
    if constexpr (std::is_same_v<U, double>) {
      return to_double(v);
    } else {
      return U(v);
    }
  }
  void check(const Polynomial& o) const {
    if (o.nvars_ != nvars_) {
      throw DimensionMismatch("polynomial variable count mismatch: " + std::to_string(nvars_) +
                              " vs " + std::to_string(o.nvars_));
    }
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

template <class T>
Polynomial<T> Polynomial<T>::compose(const std::vector<Polynomial>& subs) const {
  if (subs.size() != nvars_) throw DimensionMismatch("compose: wrong number of substitutes");
  const std::size_t out_vars = subs.empty() ? 0 : subs.front().nvars();
  // powers[i][k] = subs[i]^k, filled lazily
  std::vector<std::vector<Polynomial>> powers(nvars_);
  auto power = [&](std::size_t i, int k) -> const Polynomial& {
    auto& row = powers[i];
    if (row.empty()) row.push_back(Polynomial::constant(out_vars, T(1)));
    while (int(row.size()) <= k) row.push_back(row.back() * subs[i]);
    return row[k];
  };
  Polynomial r(out_vars);
  for (const auto& [m, c] : terms_) {
    Polynomial t = Polynomial::constant(out_vars, c);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] > 0) t = t * power(i, m[i]);
    }
    r += t;
  }
  return r;
}

/// Exact integral of a polynomial over the box prod [lo_i, hi_i].
template <class T>
T integrate_over_box(const Polynomial<T>& p, std::span<const T> lo, std::span<const T> hi) {
  T acc(0);
  for (const auto& [m, c] : p.terms()) {
    T t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      T a(1), b(1);
      for (int k = 0; k <= m[i]; ++k) {
        a *= lo[i];
        b *= hi[i];
      }
      t *= (b - a) / T(int(m[i]) + 1);
    }
    acc += t;
  }
  return acc;
}

/// Flattened double polynomial for fast repeated evaluation.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  template <class T>
  explicit CompiledPolynomial(const Polynomial<T>& p) : nvars_(p.nvars()) {
    for (const auto& [m, c] : p.terms()) {
      coeffs_.push_back(to_double(c));
      for (auto e : m) {
        exps_.push_back(e);
        max_exp_ = std::max<int>(max_exp_, e);
      }
    }
  }
  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator()(const double* x) const;
  double operator()(std::span<const double> x) const { return (*this)(x.data()); }

 private:
  std::size_t nvars_ = 0;
  int max_exp_ = 0;
  std::vector<double> coeffs_;
  std::vector<std::uint16_t> exps_;
};

/// Closed interval for conservative bounds of polynomial ranges over boxes.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Conservative enclosure of p over the box prod [lo_i, hi_i] (interval arithmetic).
Interval bound_over_box(const Polynomial<double>& p, std::span<const double> lo,
                        std::span<const double> hi);

/// Human-readable rendering, e.g. "x3 - 1/2*x1*x2". Terms are printed in
/// WeightedMonomialLess order when weights are given.
std::string format_polynomial(const Polynomial<Rational>& p, std::span<const int> weights = {},
                              const std::string& var = "x");
std::string format_polynomial(const Polynomial<double>& p, std::span<const int> weights = {},
                              const std::string& var = "x");
std::string format_monomial(const Monomial& m, const std::string& var = "x");

}  // namespace carnot
