#pragma once

#include <map>
#include <string>
#include <vector>

#include "carnot/group.hpp"

namespace carnot {

/// Index of one scalar contact equation: horizontal direction j (layer-1 slot, 0-based)
/// and target coordinate `target` (flat index of a layer >= 2 basis vector).
struct ContactEquation {
  int j = 0;
  int target = 0;
};

/// Equations in the order used by both residual functions: j outer, target inner.
std::vector<ContactEquation> contact_equations(const CarnotGroup& G);

/// X_(1,j) z_(l,k) - sum_r z_(l-1,r) alpha^{l-1,1,k}_{r,j}, one polynomial per equation,
/// with z the coefficients of Z against the left-invariant frame.
std::vector<Poly> contact_residual(const CarnotGroup& G, const PolyVectorField& Z);

/// The same quantities read off the bracket: minus the layer >= 2 frame components of [Z, X_(1,j)].
std::vector<Poly> bracket_residual(const CarnotGroup& G, const PolyVectorField& Z);

bool is_contact(const CarnotGroup& G, const PolyVectorField& Z);

struct ContactSolution {
  int degree = 0;
  /// Kernel basis in the coordinate frame, grouped by homogeneous order then column order.
  std::vector<PolyVectorField> basis;
  /// Homogeneous order of each basis element (z_(l,v) has weighted degree l + order).
  std::vector<int> order;
  /// Dimension of the homogeneous kernel for each order -s..degree.
  std::map<int, int> graded_dimension;
  /// Cumulative dimension for each degree bound 0..degree.
  std::map<int, int> dimension;
  /// Unknowns and equations of the assembled systems, summed over orders.
  long unknowns = 0;
  long equations = 0;
};

/// Exact kernel of the contact equations over polynomial fields whose coefficient
/// z_(l,v) has weighted degree <= D + l.
ContactSolution solve_contact_fields(const CarnotGroup& G, int D);

/// Kernel of the homogeneous order-k slice only (used by solve_contact_fields).
std::vector<PolyVectorField> solve_contact_order(const CarnotGroup& G, int k, long* unknowns = nullptr,
                                                 long* equations = nullptr);

/// Kernel of the system assembled without the grading split (all orders at once);
/// slower, used as a cross-check of the graded solver.
int ungraded_kernel_dimension(const CarnotGroup& G, int D);

/// Exact span membership over Q.
bool in_span(const std::vector<PolyVectorField>& basis, const PolyVectorField& Z);
int rank_of_fields(const std::vector<PolyVectorField>& fields);

struct ProbeReport {
  std::vector<std::pair<int, int>> table;  // (D, dimension)
  bool stabilized = false;
  int stable_dimension = 0;
  int since = 0;
  std::string verdict;
};

/// Dimension table for D = 0..Dmax; "stabilized" when three consecutive dimensions agree.
ProbeReport rigidity_probe(const CarnotGroup& G, int Dmax);

}  // namespace carnot
