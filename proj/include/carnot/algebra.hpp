#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carnot/polynomial.hpp"
#include "carnot/rational.hpp"

namespace carnot {

/// Position of a basis vector in the stratification: layer l (1..s), slot v (1..d_l).
struct BasisIndex {
  int layer = 1;
  int slot = 1;
  friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;
};

std::string to_string(const BasisIndex& b);

/// Sparse coordinate vector over basis positions (flat indices).
using SparseVector = std::vector<std::pair<int, Rational>>;

/// Coefficients of an algebra element, one per flat basis index.
using AlgebraVector = std::vector<Rational>;

/// One bracket relation [a, b] = sum as written in the input (before normalization).
struct BracketRelation {
  BasisIndex left;
  BasisIndex right;
  std::vector<std::pair<BasisIndex, Rational>> value;
};

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  const ValidationCheck& check(const std::string& name) const;
};

/// Stratified nilpotent Lie algebra g = g_1 + ... + g_s given by rational structure
/// constants in a basis adapted to the stratification. Flat basis indices are
/// layer-major, slot-minor; brackets are stored once per unordered pair.
class StratifiedLieAlgebra {
 public:
  StratifiedLieAlgebra(std::vector<int> strata_dims, const std::vector<BracketRelation>& relations,
                       std::string name = "custom");

  const std::string& name() const { return name_; }
  const std::vector<int>& strata() const { return strata_; }
  int dim() const { return int(layer_of_.size()); }
  int step() const { return int(strata_.size()); }
  int layer_dim(int layer) const { return strata_.at(layer - 1); }

  int layer_of(int flat) const { return layer_of_.at(flat); }
  const std::vector<int>& layers() const { return layer_of_; }
  BasisIndex basis_index(int flat) const;
  int flat_index(const BasisIndex& b) const;
  /// First flat index of a layer.
  int layer_offset(int layer) const { return offsets_.at(layer - 1); }

  /// [e_a, e_b] for flat indices, sign-adjusted from the unordered storage.
  SparseVector bracket_basis(int a, int b) const;

  /// Structure constant: coefficient of e_c in [e_a, e_b].
  Rational structure_constant(int a, int b, int c) const;

  /// Bilinear bracket over any coefficient ring T constructible from Rational.
  template <class T>
  std::vector<T> bracket(const std::vector<T>& x, const std::vector<T>& y) const;

  /// Dilation delta_t: layer-l coordinates scaled by t^l. Throws for t <= 0.
  template <class T>
  std::vector<T> dilate(const T& t, const std::vector<T>& x) const;

  /// nu = sum_l l * d_l.
  int homogeneous_dimension() const;

  /// Relations as given at construction (used by validate()).
  const std::vector<BracketRelation>& relations() const { return raw_; }

  /// Stored pairs (a < b) with their nonzero brackets.
  const std::map<std::pair<int, int>, SparseVector>& table() const { return table_; }

 private:
  std::string name_;
  std::vector<int> strata_;
  std::vector<int> layer_of_;
  std::vector<int> offsets_;
  std::map<std::pair<int, int>, SparseVector> table_;
  std::vector<BracketRelation> raw_;
};

AlgebraVector bracket(const StratifiedLieAlgebra& A, const AlgebraVector& x, const AlgebraVector& y);
AlgebraVector dilate_algebra(const StratifiedLieAlgebra& A, const Rational& t, const AlgebraVector& x);
int homogeneous_dimension(const StratifiedLieAlgebra& A);

/// Checks antisymmetry, grading, Jacobi and generation exactly.
ValidationReport validate(const StratifiedLieAlgebra& A);

/// Builtin names: heisenberg, heisenberg(k), engel, g235, free(m,s).
StratifiedLieAlgebra builtin(const std::string& name);
StratifiedLieAlgebra heisenberg(int k);
StratifiedLieAlgebra engel();
StratifiedLieAlgebra g235();
/// Free nilpotent Lie algebra of rank m and step s presented in a Hall basis.
StratifiedLieAlgebra free_nilpotent(int rank, int step);

/// Hall basis element: a generator (left = right = -1, generator index in `generator`)
/// or the bracket [left, right] of two earlier elements.
struct HallElement {
  int left = -1;
  int right = -1;
  int generator = -1;
  int weight = 1;
};
std::vector<HallElement> hall_basis(int rank, int step);
std::string format_hall_element(const std::vector<HallElement>& basis, int i);

/// Group-definition file parser and writer.
StratifiedLieAlgebra parse_group_file(const std::string& text, const std::string& name = "file");
StratifiedLieAlgebra load_group(const std::string& path_or_builtin);
std::string format_group_file(const StratifiedLieAlgebra& A);

/// Unit vector e_flat of length n.
AlgebraVector unit_vector(int n, int flat);

// Scalar helpers so bracket/BCH work over Rational, double and polynomial rings.
inline void scale_by(Rational& x, const Rational& q) { x *= q; }
inline void scale_by(double& x, const Rational& q) { x *= q.get_d(); }
template <class C>
void scale_by(Polynomial<C>& p, const Rational& q) {
  if constexpr (std::is_same_v<C, double>) {
    p *= q.get_d();
  } else {
    p *= C(q);
  }
}
template <class T>
T zero_like(const T& x) {
  T z = x;
  z -= x;
  return z;
}

// ---------------------------------------------------------------------------

template <class T>
std::vector<T> StratifiedLieAlgebra::bracket(const std::vector<T>& x, const std::vector<T>& y) const {
  const int n = dim();
  if (int(x.size()) != n || int(y.size()) != n) {
    throw DimensionMismatch("bracket: expected vectors of length " + std::to_string(n));
  }
  std::vector<T> out(n, zero_like(x[0]));
  for (const auto& [pair, value] : table_) {
    const auto [a, b] = pair;
    // [x, y] picks up x_a y_b - x_b y_a on the stored pair (a < b)
    T coeff = x[a] * y[b];
    coeff -= x[b] * y[a];
    for (const auto& [c, v] : value) {
      T term = coeff;
      scale_by(term, v);
      out[c] += term;
    }
  }
  return out;
}

template <class T>
std::vector<T> StratifiedLieAlgebra::dilate(const T& t, const std::vector<T>& x) const {
  if (!(t > 0)) throw PreconditionError("dilation parameter must be positive");
  if (int(x.size()) != dim()) throw DimensionMismatch("dilate: wrong vector length");
  std::vector<T> out = x;
  for (int i = 0; i < dim(); ++i) {
    for (int k = 0; k < layer_of_[i]; ++k) out[i] *= t;
  }
  return out;
}

}  // namespace carnot
