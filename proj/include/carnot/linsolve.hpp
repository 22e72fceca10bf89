#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

/// Sparse rational row: (column, value) pairs with strictly increasing columns
/// and no zero values.
using SparseRow = std::vector<std::pair<int, Rational>>;

/// Incrementally built row echelon form over Q. Pivots are chosen as the
/// smallest column index of each row, so column order is the elimination order.
class EchelonForm {
 public:
  explicit EchelonForm(int ncols) : ncols_(ncols) {}

  int ncols() const { return ncols_; }
  int rank() const { return int(pivots_.size()); }

  /// Adds a row; returns true when it was independent of the rows already present.
  bool add_row(SparseRow row);

  /// True when `row` lies in the row space.
  bool in_row_space(SparseRow row) const;

  /// Brings the stored rows to reduced form (each pivot column is a unit column).
  void reduce();

  /// Basis of the null space, one dense vector per free column, in increasing
  /// free-column order. Each vector has a 1 at its free column and 0 at the others.
  std::vector<std::vector<Rational>> kernel();

  const std::map<int, SparseRow>& rows() const { return pivots_; }

 private:
  void eliminate(SparseRow& row) const;

  int ncols_;
  std::map<int, SparseRow> pivots_;  // pivot column -> normalized row
  bool reduced_ = true;
};

/// row += factor * other
void axpy(SparseRow& row, const Rational& factor, const SparseRow& other);

/// Rank of a list of dense rational vectors.
int rank_of(const std::vector<std::vector<Rational>>& vectors);

}  // namespace carnot
