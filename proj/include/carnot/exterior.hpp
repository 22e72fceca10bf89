#pragma once

#include <string>

#include "carnot/group.hpp"

namespace carnot {

/// Weight of a form under the dilations: homogeneous value, "mixed", or zero form.
struct Weight {
  enum class Kind { Homogeneous, Mixed, Zero };
  Kind kind = Kind::Zero;
  int value = 0;

  static Weight homogeneous(int w) { return {Kind::Homogeneous, w}; }
  static Weight mixed() { return {Kind::Mixed, 0}; }
  static Weight zero() { return {Kind::Zero, 0}; }
  bool is_homogeneous() const { return kind == Kind::Homogeneous; }
  friend bool operator==(const Weight&, const Weight&) = default;
};

std::string to_string(const Weight& w);

/// -(sum of layers) of the coframe monomial sigma_I.
int coframe_weight(const CarnotGroup& G, FormKey k);

/// Weight of a form given in the dx basis; components are read against the coframe.
Weight weight_of(const CarnotGroup& G, const PolyForm& w);
/// Same, for a form already written in the sigma basis.
Weight weight_of_coframe_form(const CarnotGroup& G, const PolyForm& w_sigma);

/// -nu <= wt <= -k for a nonzero homogeneous k-form. Throws PreconditionError for
/// the zero form or a mixed form.
bool verify_weight_bound(const CarnotGroup& G, const PolyForm& w);

/// eta(X_(1,j)) == 0 exactly for every layer-1 frame field.
bool is_vertical(const CarnotGroup& G, const PolyForm& eta);

/// sigma-hat_(1,i): wedge of all coframe forms except sigma_(1,i), in increasing order (dx basis).
PolyForm sigma_hat(const CarnotGroup& G, int i);
FormKey sigma_hat_key(const CarnotGroup& G, int i);

}  // namespace carnot
