#include "carnot/exterior.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace carnot;

namespace {

Poly cst(int n, Rational c) { return Poly::constant(n, c); }

}  // namespace

TEST_CASE("interior product against the frame") {
  CarnotGroup G(heisenberg(1));
  const auto& s = G.coframe();
  CHECK(interior_product(G.left_frame()[0], wedge(s[0], s[1])) == s[1]);
  CHECK(interior_product(G.left_frame()[1], wedge(s[0], s[1])) == PolyForm(s[0]).scale(Rational(-1)));
}

TEST_CASE("wedge anticommutativity and Leibniz rule") {
  std::mt19937 rng(31);
  const int n = 4;
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 1 + int(rng() % 2), q = 1 + int(rng() % 2);
    auto a = testutil::random_form(rng, n, p, 2);
    auto b = testutil::random_form(rng, n, q, 2);
    auto ba = wedge(b, a);
    if ((p * q) % 2) ba.scale(Rational(-1));
    CHECK(wedge(a, b) == ba);
    auto X = testutil::random_field(rng, n, 2);
    auto lhs = interior_product(X, wedge(a, b));
    auto rhs2 = wedge(a, interior_product(X, b));
    if (p % 2) rhs2.scale(Rational(-1));
    CHECK(lhs == wedge(interior_product(X, a), b) + rhs2);
  }
  // degree overflow gives the zero form
  auto top = constant_form(3, key_of({0, 1, 2}));
  CHECK(wedge(top, constant_form(3, key_of({0}))).is_zero());
}

TEST_CASE("exterior derivative") {
  CarnotGroup G(heisenberg(1));
  CHECK(exterior_derivative(G.coframe()[2]) == constant_form(3, key_of({0, 1}), -1));
  CHECK(exterior_derivative(constant_form(3, key_of({1}))).is_zero());
  std::mt19937 rng(37);
  for (int k = 0; k <= 4; ++k) {
    for (int trial = 0; trial < 5; ++trial) {
      auto w = testutil::random_form(rng, 5, k, 3);
      CHECK(exterior_derivative(exterior_derivative(w)).is_zero());
    }
  }
}

TEST_CASE("Maurer-Cartan equations match the bracket table") {
  for (const auto& name : testutil::builtin_names()) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const auto& A = G.algebra();
    const int n = G.dim();
    for (int c = 0; c < n; ++c) {
      // d sigma_c = - sum_{a<b} c_ab^c sigma_a ^ sigma_b
      PolyForm expect(n, 2);
      for (const auto& [pair, value] : A.table()) {
        for (const auto& [k, q] : value) {
          if (k == c) expect.add(key_of({pair.first, pair.second}), cst(n, -q));
        }
      }
      CHECK(G.to_coframe_basis(exterior_derivative(G.coframe()[c])) == expect);
    }
  }
}

TEST_CASE("lie bracket identities and Cartan formula") {
  std::mt19937 rng(41);
  const int n = 4;
  for (int trial = 0; trial < 10; ++trial) {
    auto X = testutil::random_field(rng, n, 2);
    auto Y = testutil::random_field(rng, n, 2);
    auto Z = testutil::random_field(rng, n, 1);
    CHECK(lie_bracket(X, X).is_zero());
    auto jac = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y));
    CHECK(jac.is_zero());
    for (int k = 0; k <= 3; ++k) {
      auto w = testutil::random_form(rng, n, k, 2);
      auto cartan = interior_product(X, exterior_derivative(w));
      if (k > 0) cartan += exterior_derivative(interior_product(X, w));
      CHECK(lie_derivative(X, w) == cartan);
    }
  }
}

TEST_CASE("weights") {
  CarnotGroup H(heisenberg(1));
  CHECK(weight_of(H, H.coframe()[0]) == Weight::homogeneous(-1));
  CHECK(weight_of(H, wedge(H.coframe()[0], H.coframe()[2])) == Weight::homogeneous(-3));
  CHECK(weight_of(H, H.coframe()[0] + H.coframe()[2]) == Weight::mixed());
  CHECK(weight_of(H, PolyForm(3, 1)) == Weight::zero());
  CHECK(to_string(Weight::mixed()) == "mixed");
  CHECK_THROWS_AS(verify_weight_bound(H, PolyForm(3, 2)), PreconditionError);
  for (const auto& name : testutil::builtin_names()) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    const FormKey all = (FormKey(1) << n) - 1;
    CHECK(weight_of(G, constant_form(n, all)) == Weight::homogeneous(-G.homogeneous_dimension()));
    const int d1 = G.algebra().layer_dim(1);
    CHECK(weight_of(G, G.coframe_monomial((FormKey(1) << d1) - 1)) == Weight::homogeneous(-d1));
  }
}

TEST_CASE("weight bound on random coframe monomials") {
  std::mt19937 rng(43);
  for (const auto& name : testutil::builtin_names()) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
      FormKey k = 0;
      while (k == 0) k = FormKey(rng()) & ((FormKey(1) << n) - 1);
      PolyForm w = G.from_coframe_basis(PolyForm::basis(n, k, testutil::random_poly(rng, n, 2, 3) + cst(n, 1)));
      if (w.is_zero()) continue;
      if (!verify_weight_bound(G, w)) ++failures;
      CHECK(weight_of(G, w) == Weight::homogeneous(coframe_weight(G, k)));
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("dilations act on homogeneous forms by t^w") {
  for (const auto& name : testutil::builtin_names()) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    const Rational t(3, 2);
    // (delta_t)_* = (delta_{1/t})^*
    auto D = G.dilation(1 / t);
    for (FormKey k = 1; k < (FormKey(1) << n); k += 3) {
      PolyForm w = G.coframe_monomial(k);
      const int wt = coframe_weight(G, k);
      Rational f = 1;
      for (int i = 0; i < -wt; ++i) f /= t;
      CHECK(pullback(D, w) == PolyForm(w).scale(f));
    }
  }
}

TEST_CASE("verticality and the weight annihilation") {
  std::mt19937 rng(47);
  for (const auto& name : testutil::builtin_names()) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    const int d1 = G.algebra().layer_dim(1);
    for (int i = 0; i < d1; ++i) CHECK_FALSE(is_vertical(G, G.coframe()[i]));
    for (int a = d1; a < n; ++a) {
      CHECK(is_vertical(G, G.coframe()[a]));
      auto f = testutil::random_poly(rng, n, 2);
      PolyForm eta = G.coframe()[a].map_coefficients([&](const Poly& c) { return c * f; });
      CHECK(is_vertical(G, eta));
      // any beta of weight -nu+1
      PolyForm beta(n, n - 1);
      for (int i = 0; i < d1; ++i) {
        PolyForm h = sigma_hat(G, i);
        auto g = testutil::random_poly(rng, n, 2);
        beta += h.map_coefficients([&](const Poly& c) { return c * g; });
      }
      CHECK(weight_of(G, beta) == Weight::homogeneous(-G.homogeneous_dimension() + 1));
      CHECK(wedge(G.coframe()[a], beta).is_zero());
      CHECK(wedge(eta, beta).is_zero());
    }
    CHECK_THROWS_AS(is_vertical(G, constant_form(n, key_of({0, 1}))), PreconditionError);
  }
}
