#pragma once

#include <random>
#include <string>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/forms.hpp"

namespace testutil {

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"heisenberg(1)", "heisenberg(2)", "engel",
                                                 "free(2,2)",     "free(2,3)",     "g235"};
  return names;
}

inline carnot::Rational random_rational(std::mt19937& rng, int num = 7, int den = 5) {
  std::uniform_int_distribution<int> p(-num, num), q(1, den);
  return carnot::Rational(p(rng), q(rng));
}

inline std::vector<carnot::Rational> random_point(std::mt19937& rng, int n) {
  std::vector<carnot::Rational> x(n);
  for (auto& v : x) {
    v = random_rational(rng);
    v.canonicalize();
  }
  return x;
}

/// Random polynomial in n variables with small rational coefficients and total degree <= deg.
inline carnot::Poly random_poly(std::mt19937& rng, int n, int deg, int terms = 4) {
  carnot::Poly p(n);
  std::uniform_int_distribution<int> var(0, n - 1), d(0, deg);
  for (int t = 0; t < terms; ++t) {
    carnot::Monomial m(n, 0);
    const int k = d(rng);
    for (int i = 0; i < k; ++i) ++m[var(rng)];
    carnot::Rational c = random_rational(rng);
    c.canonicalize();
    p.add_term(m, c);
  }
  return p;
}

inline carnot::PolyVectorField random_field(std::mt19937& rng, int n, int deg) {
  carnot::PolyVectorField X(n);
  for (int i = 0; i < n; ++i) X[i] = random_poly(rng, n, deg, 3);
  return X;
}

inline carnot::PolyForm random_form(std::mt19937& rng, int n, int k, int deg) {
  carnot::PolyForm w(n, k);
  for (carnot::FormKey key = 0; key < (carnot::FormKey(1) << n); ++key) {
    if (carnot::key_degree(key) == k && rng() % 2) w.add(key, random_poly(rng, n, deg, 2));
  }
  return w;
}

}  // namespace testutil
