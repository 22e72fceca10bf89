#include "carnot/linsolve.hpp"

#include <algorithm>

namespace carnot {

void axpy(SparseRow& row, const Rational& factor, const SparseRow& other) {
  SparseRow out;
  out.reserve(row.size() + other.size());
  auto a = row.begin();
  auto b = other.begin();
  while (a != row.end() || b != other.end()) {
    if (b == other.end() || (a != row.end() && a->first < b->first)) {
      out.push_back(std::move(*a));
      ++a;
    } else if (a == row.end() || b->first < a->first) {
      out.emplace_back(b->first, factor * b->second);
      ++b;
    } else {
      Rational v = a->second + factor * b->second;
      if (!is_zero(v)) out.emplace_back(a->first, std::move(v));
      ++a;
      ++b;
    }
  }
  row = std::move(out);
}

void EchelonForm::eliminate(SparseRow& row) const {
  // Walk columns left to right; every hit on a pivot column is cleared.
  std::size_t pos = 0;
  while (pos < row.size()) {
    const int col = row[pos].first;
    auto it = pivots_.find(col);
    if (it == pivots_.end()) {
      ++pos;
      continue;
    }
    const Rational factor = -row[pos].second;
    axpy(row, factor, it->second);
    // entries before pos are untouched since the pivot row starts at col
  }
}

bool EchelonForm::add_row(SparseRow row) {
  eliminate(row);
  if (row.empty()) return false;
  const Rational lead = row.front().second;
  for (auto& [c, v] : row) v /= lead;
  pivots_.emplace(row.front().first, std::move(row));
  reduced_ = false;
  return true;
}

bool EchelonForm::in_row_space(SparseRow row) const {
  eliminate(row);
  return row.empty();
}

void EchelonForm::reduce() {
  if (reduced_) return;
  // Back substitution from the last pivot to the first.
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    const int col = it->first;
    for (auto& [pc, prow] : pivots_) {
      if (pc >= col) break;
      auto hit = std::lower_bound(prow.begin(), prow.end(), col,
                                  [](const auto& e, int c) { return e.first < c; });
      if (hit == prow.end() || hit->first != col) continue;
      const Rational factor = -hit->second;
      axpy(prow, factor, it->second);
    }
  }
  reduced_ = true;
}

std::vector<std::vector<Rational>> EchelonForm::kernel() {
  reduce();
  std::vector<std::vector<Rational>> basis;
  for (int f = 0; f < ncols_; ++f) {
    if (pivots_.count(f)) continue;
    std::vector<Rational> v(ncols_, Rational(0));
    v[f] = 1;
    for (const auto& [pc, prow] : pivots_) {
      auto hit = std::lower_bound(prow.begin(), prow.end(), f,
                                  [](const auto& e, int c) { return e.first < c; });
      if (hit != prow.end() && hit->first == f) v[pc] = -hit->second;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

int rank_of(const std::vector<std::vector<Rational>>& vectors) {
  if (vectors.empty()) return 0;
  EchelonForm ef(int(vectors.front().size()));
  for (const auto& v : vectors) {
    SparseRow row;
    for (int i = 0; i < int(v.size()); ++i) {
      if (!is_zero(v[i])) row.emplace_back(i, v[i]);
    }
    ef.add_row(std::move(row));
  }
  return ef.rank();
}

}  // namespace carnot
