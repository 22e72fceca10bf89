#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/forms.hpp"

namespace carnot {

/// Coefficients of the Dynkin form of BCH, log(e^X e^Y), truncated at words of
/// length `depth`. Words are over {0 = X, 1 = Y}; the word a1..am stands for the
/// right-nested bracket [a1,[a2,...,[a_{m-1}, a_m]]].
std::map<std::vector<int>, Rational> dynkin_coefficients(int depth);

/// log(exp(x) exp(y)) in exponential coordinates of the first kind, over any
/// coefficient ring accepted by StratifiedLieAlgebra::bracket.
template <class T>
std::vector<T> bch(const StratifiedLieAlgebra& A, const std::vector<T>& x, const std::vector<T>& y);

/// Polynomial map between coordinate spaces, optionally carrying its polynomial inverse.
struct PolyMap {
  std::vector<Poly> comp;
  std::optional<std::vector<Poly>> inverse;
  std::string label = "map";

  int dim() const { return int(comp.size()); }
  std::vector<double> evaluate(std::span<const double> x) const;
  std::vector<Rational> evaluate(const std::vector<Rational>& x) const;
  /// Jacobian matrix J[i][j] = d comp_i / d x_j.
  std::vector<std::vector<Poly>> jacobian() const;
  PolyMap inverse_map() const;
};

PolyMap identity_map(int n);
/// (F o G)(x) = F(G(x)); inverses are composed when both are present.
PolyMap compose(const PolyMap& F, const PolyMap& G);

/// Determinant of a square polynomial matrix (expansion over column subsets).
Poly determinant(const std::vector<std::vector<Poly>>& M);

/// (F_* Z)(y) = DF(F^{-1}(y)) Z(F^{-1}(y)); needs F.inverse.
PolyVectorField pushforward(const PolyMap& F, const PolyVectorField& Z);
/// Standard pullback F^* of a form written in the dx basis.
PolyForm pullback(const PolyMap& F, const PolyForm& w);

/// A Carnot group in exponential coordinates of the first kind: exact group law,
/// invariant frames and the left-invariant coframe.
class CarnotGroup {
 public:
  explicit CarnotGroup(StratifiedLieAlgebra A);

  const StratifiedLieAlgebra& algebra() const { return A_; }
  int dim() const { return A_.dim(); }
  int step() const { return A_.step(); }
  /// Weighted degree of each coordinate (its layer).
  const std::vector<int>& weights() const { return A_.layers(); }
  int homogeneous_dimension() const { return A_.homogeneous_dimension(); }

  /// Group law mu(x, y) as polynomials in 2n variables (x first, then y).
  const std::vector<Poly>& law() const { return law_; }

  std::vector<Rational> product(const std::vector<Rational>& x, const std::vector<Rational>& y) const;
  std::vector<double> product(std::span<const double> x, std::span<const double> y) const;
  /// Allocation-free variant; `out` may not alias x or y.
  void product(const double* x, const double* y, double* out) const;
  template <class T>
  static std::vector<T> inverse(const std::vector<T>& x) {
    std::vector<T> r = x;
    for (auto& v : r) v = -v;
    return r;
  }

  PolyMap left_translation(const std::vector<Rational>& a) const;
  PolyMap right_translation(const std::vector<Rational>& a) const;
  PolyMap dilation(const Rational& t) const;

  /// X_i(x) = d/dt mu(x, t e_i) at t = 0.
  const std::vector<PolyVectorField>& left_frame() const { return left_; }
  /// X^R_i(x) = d/dt mu(t e_i, x) at t = 0.
  const std::vector<PolyVectorField>& right_frame() const { return right_; }
  /// sigma_i with sigma_i(X_j) = delta_ij, in the dx basis.
  const std::vector<PolyForm>& coframe() const { return coframe_; }

  /// frame_matrix()[j][i] = dx_j(X_i); unipotent.
  const std::vector<std::vector<Poly>>& frame_matrix() const { return M_; }
  const std::vector<std::vector<Poly>>& coframe_matrix() const { return Minv_; }

  /// z_i = sigma_i(Z), coefficients of Z against the left-invariant frame.
  std::vector<Poly> frame_coefficients(const PolyVectorField& Z) const;
  PolyVectorField from_frame_coefficients(const std::vector<Poly>& z) const;

  /// Change of basis for forms: dx-basis to sigma-basis and back.
  PolyForm to_coframe_basis(const PolyForm& w) const;
  PolyForm from_coframe_basis(const PolyForm& w) const;

  /// sigma_I = sigma_{i1} ^ ... ^ sigma_{ik} in the dx basis.
  PolyForm coframe_monomial(FormKey k) const;

  /// Infinitesimal generator of the dilations, sum l * x_(l,v) d_(l,v).
  PolyVectorField dilation_generator() const;

  /// Homogeneous gauge (sum |x_(l,v)|^(2 s!/l))^(1/(2 s!)).
  double gauge(std::span<const double> x) const;
  double gauge_distance(std::span<const double> x, std::span<const double> y) const;
  int gauge_exponent() const { return gauge_exp_; }

  /// Compiled group-law components for fast numeric evaluation.
  const std::vector<CompiledPolynomial>& compiled_law() const { return law_c_; }

 private:
  StratifiedLieAlgebra A_;
  std::vector<Poly> law_;
  std::vector<CompiledPolynomial> law_c_;
  std::vector<PolyVectorField> left_, right_;
  std::vector<std::vector<Poly>> M_, Minv_;
  std::vector<PolyForm> coframe_;
  std::vector<PolyForm> dx_in_sigma_;
  int gauge_exp_ = 2;
};

// ---------------------------------------------------------------------------

template <class T>
std::vector<T> bch(const StratifiedLieAlgebra& A, const std::vector<T>& x, const std::vector<T>& y) {
  if (int(x.size()) != A.dim() || int(y.size()) != A.dim()) throw DimensionMismatch("bch: wrong point length");
  static thread_local std::map<int, std::map<std::vector<int>, Rational>> cache;
  auto it = cache.find(A.step());
  if (it == cache.end()) it = cache.emplace(A.step(), dynkin_coefficients(A.step())).first;
  std::vector<T> out(x.size(), zero_like(x[0]));
  for (const auto& [word, c] : it->second) {
    std::vector<T> acc = word.back() == 0 ? x : y;
    for (int p = int(word.size()) - 2; p >= 0; --p) acc = A.bracket(word[p] == 0 ? x : y, acc);
    for (std::size_t i = 0; i < out.size(); ++i) {
      T term = acc[i];
      scale_by(term, c);
      out[i] += term;
    }
  }
  return out;
}

}  // namespace carnot
