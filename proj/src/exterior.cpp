#include "carnot/exterior.hpp"

namespace carnot {

std::string to_string(const Weight& w) {
  switch (w.kind) {
    case Weight::Kind::Homogeneous:
      return std::to_string(w.value);
    case Weight::Kind::Mixed:
      return "mixed";
    case Weight::Kind::Zero:
      break;
  }
  return "zero";
}

int coframe_weight(const CarnotGroup& G, FormKey k) {
  int w = 0;
  for (int i : key_indices(k)) w -= G.weights()[i];
  return w;
}

Weight weight_of_coframe_form(const CarnotGroup& G, const PolyForm& w_sigma) {
  if (w_sigma.is_zero()) return Weight::zero();
  std::optional<int> common;
  for (const auto& [k, c] : w_sigma.components()) {
    const int w = coframe_weight(G, k);
    if (common && *common != w) return Weight::mixed();
    common = w;
  }
  return Weight::homogeneous(*common);
}

Weight weight_of(const CarnotGroup& G, const PolyForm& w) {
  return weight_of_coframe_form(G, G.to_coframe_basis(w));
}

bool verify_weight_bound(const CarnotGroup& G, const PolyForm& w) {
  const Weight wt = weight_of(G, w);
  if (wt.kind == Weight::Kind::Zero) throw PreconditionError("weight bound: zero form has no weight");
  if (wt.kind == Weight::Kind::Mixed) throw PreconditionError("weight bound: form is not homogeneous");
  return -G.homogeneous_dimension() <= wt.value && wt.value <= -w.degree();
}

bool is_vertical(const CarnotGroup& G, const PolyForm& eta) {
  if (eta.degree() != 1) throw PreconditionError("is_vertical expects a 1-form");
  const int d1 = G.algebra().layer_dim(1);
  for (int j = 0; j < d1; ++j) {
    if (!interior_product(G.left_frame()[j], eta).is_zero()) return false;
  }
  return true;
}

FormKey sigma_hat_key(const CarnotGroup& G, int i) {
  if (i < 0 || i >= G.algebra().layer_dim(1)) throw DimensionMismatch("sigma_hat: index outside layer 1");
  const FormKey all = (FormKey(1) << G.dim()) - 1;
  return all & ~(FormKey(1) << i);
}

PolyForm sigma_hat(const CarnotGroup& G, int i) { return G.coframe_monomial(sigma_hat_key(G, i)); }

}  // namespace carnot
