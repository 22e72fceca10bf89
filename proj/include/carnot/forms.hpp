#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "carnot/polynomial.hpp"
#include "carnot/rational.hpp"

namespace carnot {

using Poly = Polynomial<Rational>;

template <class C>
C zero_coefficient(int n) {
  if constexpr (std::is_arithmetic_v<C>) {
    return C(0);
  } else if constexpr (std::is_same_v<C, Rational>) {
    return Rational(0);
  } else {
    return C(std::size_t(n));
  }
}

/// Vector field sum_i comp[i] d/dx_i with polynomial coefficients.
class PolyVectorField {
 public:
  PolyVectorField() = default;
  explicit PolyVectorField(int n) : comp_(n, Poly(std::size_t(n))) {}
  explicit PolyVectorField(std::vector<Poly> comp) : comp_(std::move(comp)) {}

  /// Constant field e_i.
  static PolyVectorField coordinate(int n, int i);

  int dim() const { return int(comp_.size()); }
  const Poly& operator[](int i) const { return comp_.at(i); }
  Poly& operator[](int i) { return comp_.at(i); }
  const std::vector<Poly>& components() const { return comp_; }

  /// Derivation action Z(f) = sum_i Z_i df/dx_i.
  Poly apply(const Poly& f) const;
  bool is_zero() const;
  std::vector<double> evaluate(std::span<const double> x) const;

  PolyVectorField& operator+=(const PolyVectorField& o);
  PolyVectorField& operator-=(const PolyVectorField& o);
  PolyVectorField& operator*=(const Rational& s);
  PolyVectorField& operator*=(const Poly& f);
  friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
  friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
  friend PolyVectorField operator*(const Rational& s, PolyVectorField a) { return a *= s; }
  friend PolyVectorField operator*(const Poly& f, PolyVectorField a) { return a *= f; }
  friend bool operator==(const PolyVectorField&, const PolyVectorField&) = default;

 private:
  std::vector<Poly> comp_;
};

/// [X, Y]_i = X(Y_i) - Y(X_i).
PolyVectorField lie_bracket(const PolyVectorField& X, const PolyVectorField& Y);

/// Strictly increasing index set of a k-form component, as a bitmask.
using FormKey = std::uint32_t;

inline int key_degree(FormKey k) { return std::popcount(k); }
inline FormKey key_of(std::initializer_list<int> idx) {
  FormKey k = 0;
  for (int i : idx) k |= FormKey(1) << i;
  return k;
}
std::vector<int> key_indices(FormKey k);
/// Sign of e_I ^ e_J relative to e_{I u J} (0 when I and J overlap).
int wedge_sign(FormKey a, FormKey b);

/// Differential k-form sum_I c_I e_I with coefficients in C, over a fixed ordered
/// basis of 1-forms e_0..e_{n-1} (the coordinate coframe dx, or the invariant coframe).
template <class C>
class Form {
 public:
  Form() = default;
  Form(int n, int degree) : n_(n), degree_(degree) {
    if (degree < 0) throw PreconditionError("negative form degree");
  }

  static Form one_form(int n, const std::vector<C>& coeffs) {
    Form f(n, 1);
    for (int i = 0; i < n; ++i) f.add(FormKey(1) << i, coeffs.at(i));
    return f;
  }
  static Form basis(int n, FormKey k, const C& c) {
    Form f(n, key_degree(k));
    f.add(k, c);
    return f;
  }

  int dim() const { return n_; }
  int degree() const { return degree_; }
  const std::map<FormKey, C>& components() const { return comp_; }
  bool is_zero() const { return comp_.empty(); }

  C component(FormKey k) const {
    auto it = comp_.find(k);
    return it == comp_.end() ? zero_coefficient<C>(n_) : it->second;
  }

  void add(FormKey k, const C& c) {
    if (key_degree(k) != degree_) throw DimensionMismatch("form component of the wrong degree");
    if (coefficient_is_zero(c)) return;
    auto [it, inserted] = comp_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (coefficient_is_zero(it->second)) comp_.erase(it);
    }
  }

  Form& operator+=(const Form& o) {
    check(o);
    for (const auto& [k, c] : o.comp_) add(k, c);
    return *this;
  }
  Form& operator-=(const Form& o) {
    check(o);
    for (const auto& [k, c] : o.comp_) {
      C m = c;
      m *= -1;
      add(k, m);
    }
    return *this;
  }
  template <class S>
  Form& scale(const S& s) {
    std::map<FormKey, C> out;
    for (auto& [k, c] : comp_) {
      C m = c;
      m *= s;
      if (!coefficient_is_zero(m)) out.emplace(k, std::move(m));
    }
    comp_ = std::move(out);
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend bool operator==(const Form&, const Form&) = default;

  /// Applies `fn` to every coefficient (e.g. composition with a map).
  Form map_coefficients(const std::function<C(const C&)>& fn) const {
    Form r(n_, degree_);
    for (const auto& [k, c] : comp_) r.add(k, fn(c));
    return r;
  }

 private:
  static bool coefficient_is_zero(const C& c) {
    if constexpr (requires { c.is_zero(); }) {
      return c.is_zero();
    } else {
      return carnot::is_zero(c);
    }
  }
  void check(const Form& o) const {
    if (o.n_ != n_ || o.degree_ != degree_) throw DimensionMismatch("form dimension/degree mismatch");
  }

  int n_ = 0;
  int degree_ = 0;
  std::map<FormKey, C> comp_;
};

template <class C>
Form<C> wedge(const Form<C>& a, const Form<C>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("wedge: dimension mismatch");
  const int deg = a.degree() + b.degree();
  if (deg > a.dim()) return Form<C>(a.dim(), deg);
  Form<C> r(a.dim(), deg);
  for (const auto& [ka, ca] : a.components()) {
    for (const auto& [kb, cb] : b.components()) {
      const int s = wedge_sign(ka, kb);
      if (s == 0) continue;
      C c = ca * cb;
      if (s < 0) c *= -1;
      r.add(ka | kb, c);
    }
  }
  return r;
}

/// Interior product i_X omega for X given by its components against the dual basis.
template <class C>
Form<C> interior(const std::vector<C>& X, const Form<C>& w) {
  if (int(X.size()) != w.dim()) throw DimensionMismatch("interior: dimension mismatch");
  if (w.degree() == 0) return Form<C>(w.dim(), 0);
  Form<C> r(w.dim(), w.degree() - 1);
  for (const auto& [k, c] : w.components()) {
    int pos = 0;
    for (int i = 0; i < w.dim(); ++i) {
      const FormKey bit = FormKey(1) << i;
      if (!(k & bit)) continue;
      C t = X[i] * c;
      if (pos % 2) t *= -1;
      r.add(k & ~bit, t);
      ++pos;
    }
  }
  return r;
}

/// Rewrites a form by replacing each basis 1-form e_i by images[i] and each
/// coefficient c by coeff(c). Pullbacks and changes of coframe are instances.
template <class C>
Form<C> substitute(const Form<C>& w, const std::vector<Form<C>>& images,
                   const std::function<C(const C&)>& coeff) {
  if (int(images.size()) != w.dim()) throw DimensionMismatch("substitute: need one image per basis 1-form");
  const int n = images.empty() ? w.dim() : images.front().dim();
  Form<C> r(n, w.degree());
  for (const auto& [k, c] : w.components()) {
    Form<C> acc = Form<C>::basis(n, 0, coeff(c));
    for (int i : key_indices(k)) acc = wedge(acc, images[i]);
    r += acc;
  }
  return r;
}

using PolyForm = Form<Poly>;

/// Coordinate exterior derivative.
PolyForm exterior_derivative(const PolyForm& w);
PolyForm interior_product(const PolyVectorField& X, const PolyForm& w);
/// Lie derivative computed componentwise, L_X(c dx_I) = X(c) dx_I + c L_X(dx_I) with
/// L_X dx_i = d(X_i); independent of Cartan's formula.
PolyForm lie_derivative(const PolyVectorField& X, const PolyForm& w);

/// Constant form c * e_I.
PolyForm constant_form(int n, FormKey k, const Rational& c = 1);

/// Evaluates coefficients at a point.
Form<double> evaluate_form(const PolyForm& w, std::span<const double> x);

std::string format_form(const PolyForm& w, std::span<const int> weights = {}, const std::string& basis = "dx");
std::string format_field(const PolyVectorField& X, std::span<const int> weights = {},
                         const std::string& basis = "d");

}  // namespace carnot
