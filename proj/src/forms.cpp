#include "carnot/forms.hpp"

#include <sstream>

namespace carnot {

PolyVectorField PolyVectorField::coordinate(int n, int i) {
  PolyVectorField X(n);
  X[i] = Poly::constant(n, Rational(1));
  return X;
}

Poly PolyVectorField::apply(const Poly& f) const {
  Poly r(f.nvars());
  for (int i = 0; i < dim(); ++i) {
    if (comp_[i].is_zero()) continue;
    Poly d = f.derivative(i);
    if (!d.is_zero()) r += comp_[i] * d;
  }
  return r;
}

bool PolyVectorField::is_zero() const {
  for (const auto& c : comp_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

std::vector<double> PolyVectorField::evaluate(std::span<const double> x) const {
  std::vector<double> v(comp_.size());
  for (std::size_t i = 0; i < comp_.size(); ++i) v[i] = comp_[i].evaluate<double>(x);
  return v;
}

PolyVectorField& PolyVectorField::operator+=(const PolyVectorField& o) {
  if (o.dim() != dim()) throw DimensionMismatch("vector field dimension mismatch");
  for (int i = 0; i < dim(); ++i) comp_[i] += o.comp_[i];
  return *this;
}

PolyVectorField& PolyVectorField::operator-=(const PolyVectorField& o) {
  if (o.dim() != dim()) throw DimensionMismatch("vector field dimension mismatch");
  for (int i = 0; i < dim(); ++i) comp_[i] -= o.comp_[i];
  return *this;
}

PolyVectorField& PolyVectorField::operator*=(const Rational& s) {
  for (auto& c : comp_) c *= s;
  return *this;
}

PolyVectorField& PolyVectorField::operator*=(const Poly& f) {
  for (auto& c : comp_) c = c * f;
  return *this;
}

PolyVectorField lie_bracket(const PolyVectorField& X, const PolyVectorField& Y) {
  if (X.dim() != Y.dim()) throw DimensionMismatch("lie_bracket: dimension mismatch");
  PolyVectorField r(X.dim());
  for (int i = 0; i < X.dim(); ++i) r[i] = X.apply(Y[i]) - Y.apply(X[i]);
  return r;
}

std::vector<int> key_indices(FormKey k) {
  std::vector<int> idx;
  for (int i = 0; k; ++i, k >>= 1) {
    if (k & 1) idx.push_back(i);
  }
  return idx;
}

int wedge_sign(FormKey a, FormKey b) {
  if (a & b) return 0;
  // count pairs (i in a, j in b) with i > j
  int inversions = 0;
  for (FormKey rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    const FormKey above = j + 1 >= 32 ? 0 : (a >> (j + 1));
    inversions += std::popcount(above);
  }
  return inversions % 2 ? -1 : 1;
}

PolyForm exterior_derivative(const PolyForm& w) {
  const int n = w.dim();
  PolyForm r(n, w.degree() + 1);
  if (w.degree() >= n) return r;
  for (const auto& [k, c] : w.components()) {
    for (int j = 0; j < n; ++j) {
      const FormKey bit = FormKey(1) << j;
      if (k & bit) continue;
      Poly d = c.derivative(j);
      if (d.is_zero()) continue;
      if (wedge_sign(bit, k) < 0) d *= Rational(-1);
      r.add(k | bit, d);
    }
  }
  return r;
}

PolyForm interior_product(const PolyVectorField& X, const PolyForm& w) {
  return interior(X.components(), w);
}

PolyForm lie_derivative(const PolyVectorField& X, const PolyForm& w) {
  const int n = w.dim();
  // L_X dx_i = d(X_i)
  std::vector<PolyForm> ldx;
  for (int i = 0; i < n; ++i) {
    PolyForm dxi(n, 1);
    for (int j = 0; j < n; ++j) dxi.add(FormKey(1) << j, X[i].derivative(j));
    ldx.push_back(std::move(dxi));
  }
  PolyForm r(n, w.degree());
  for (const auto& [k, c] : w.components()) {
    r.add(k, X.apply(c));
    const auto idx = key_indices(k);
    // c dx_{i1} ^ ... ^ L_X dx_{ip} ^ ... ^ dx_{ik}
    for (std::size_t p = 0; p < idx.size(); ++p) {
      PolyForm acc = PolyForm::basis(n, 0, c);
      for (std::size_t q = 0; q < idx.size(); ++q) {
        acc = wedge(acc, q == p ? ldx[idx[q]] : constant_form(n, FormKey(1) << idx[q]));
      }
      r += acc;
    }
  }
  return r;
}

PolyForm constant_form(int n, FormKey k, const Rational& c) {
  return PolyForm::basis(n, k, Poly::constant(n, c));
}

Form<double> evaluate_form(const PolyForm& w, std::span<const double> x) {
  Form<double> r(w.dim(), w.degree());
  for (const auto& [k, c] : w.components()) r.add(k, c.evaluate<double>(x));
  return r;
}

namespace {

std::string wrap(const std::string& s) {
  const bool single = s.find_first_of("+-", 1) == std::string::npos;
  return single ? s : "(" + s + ")";
}

}  // namespace

std::string format_form(const PolyForm& w, std::span<const int> weights, const std::string& basis) {
  if (w.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : w.components()) {
    if (!first) os << " + ";
    first = false;
    os << wrap(format_polynomial(c, weights));
    for (int i : key_indices(k)) os << (i == key_indices(k).front() ? " " : "^") << basis << (i + 1);
  }
  return os.str();
}

std::string format_field(const PolyVectorField& X, std::span<const int> weights, const std::string& basis) {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < X.dim(); ++i) {
    if (X[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << wrap(format_polynomial(X[i], weights)) << " " << basis << (i + 1);
  }
  return first ? "0" : os.str();
}

}  // namespace carnot
