#include <cmath>

#include "carnot/mollifier.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace carnot;

namespace {

PolyBump centered_bump(int n, double r = 0.4) { return PolyBump{std::vector<double>(n, 0.05), std::vector<double>(n, r), 4}; }

}  // namespace

TEST_CASE("rho_eps integrates to one by direct quadrature") {
  CarnotGroup G(heisenberg(1));
  for (double eps : {1.0, 0.5, 0.25}) {
    CAPTURE(eps);
    const Mollifier M(G, eps);
    CHECK(std::abs(direct_integral(M, 10, 16) - 1.0) <= 1e-8);
    CHECK(std::abs(direct_integral(M, 10, 16, false) - direct_integral(M, 10, 16, true)) <= 1e-11);
  }
  CarnotGroup E(builtin("engel"));
  const Mollifier M(E, 0.5);
  CHECK(std::abs(direct_integral(M, 12, 6) - 1.0) <= 1e-6);
}

TEST_CASE("rho is even, bounded by its peak, and supported in the gauge ball") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& name : testutil::builtin_names()) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    for (double eps : {1.0, 0.3}) {
      const Mollifier M(G, eps);
      const auto hi = M.support_hi();
      CHECK(G.gauge(hi) <= eps * (1 + 1e-12));
      for (int t = 0; t < 50; ++t) {
        std::vector<double> x(n), mx(n);
        for (int i = 0; i < n; ++i) {
          x[i] = u(rng) * hi[i] * 1.1;
          mx[i] = -x[i];
        }
        CHECK(M(x.data()) == M(mx.data()));
        CHECK(M(x.data()) <= M.peak());
        CHECK(M(x.data()) >= 0.0);
      }
      double w = 0.0;
      for (std::size_t k = 0; k < M.rule().size(); ++k) w += M.rule().weight(k);
      CHECK(w == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("convolution: constants, linear layer-1 functions, and the three integral forms") {
  CarnotGroup G(heisenberg(1));
  const Mollifier M(G, 0.5);
  const double x[3] = {0.1, -0.2, 0.3};
  ScalarFunction one = [](const double*) { return 1.0; };
  CHECK(convolve(M, one, x) == doctest::Approx(1.0).epsilon(1e-12));
  ScalarFunction lin = [](const double* y) { return 2.0 * y[0] - y[1]; };
  CHECK(convolve(M, lin, x) == doctest::Approx(lin(x)).epsilon(1e-12));
  CHECK(convolve(M, lin, x, ConvolutionForm::Defining, 10) == doctest::Approx(lin(x)).epsilon(1e-7));
  ScalarFunction f = [](const double* y) { return std::sin(y[0]) + y[2] * y[2] + y[1] * y[0]; };
  const double t = convolve(M, f, x, ConvolutionForm::Translated);
  CHECK(std::abs(convolve(M, f, x, ConvolutionForm::Inverted, 8) - t) <= 1e-6);
  CHECK(std::abs(convolve(M, f, x, ConvolutionForm::Defining, 8) - t) <= 1e-6);
  // polynomial inputs: moment expansion equals quadrature
  const Poly q = Poly::variable(3, 2) * Poly::variable(3, 2) + Poly::variable(3, 0) * Poly::variable(3, 1);
  const CompiledPolynomial cq(convolve(M, q)), c0(q);
  ScalarFunction fq = [&](const double* y) { return c0(y); };
  CHECK(cq(x) == doctest::Approx(convolve(M, fq, x)).epsilon(1e-13));
  // support leaving the domain
  std::pair<std::vector<double>, std::vector<double>> dom{{-0.2, -0.2, -0.2}, {0.2, 0.2, 0.2}};
  CHECK_THROWS_AS(convolve(M, f, x, ConvolutionForm::Translated, 4, dom), DomainError);
}

TEST_CASE("smoothing is linear and fixes left-invariant forms and fields") {
  for (const auto& name : testutil::builtin_names()) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    const Mollifier M(G, 0.25);
    for (int a = 0; a < n; ++a) {
      const FormD s = smooth_form(M, G.coframe()[a]);
      REQUIRE(s.components().size() == 1);
      const auto& [k, c] = *s.components().begin();
      CHECK(k == (FormKey(1) << a));
      CHECK(c.degree() == 0);
      CHECK(CompiledPolynomial(c)(std::vector<double>(n, 0.0).data()) == doctest::Approx(1.0));
      const auto z = smooth_field(M, G.left_frame()[a]);
      for (int b = 0; b < n; ++b) {
        CHECK(z[b].degree() <= 0);
        CHECK(CompiledPolynomial(z[b])(std::vector<double>(n, 0.0).data()) == doctest::Approx(a == b ? 1.0 : 0.0));
      }
    }
  }
  CarnotGroup G(heisenberg(1));
  const Mollifier M(G, 0.5);
  std::mt19937 rng(8);
  const Poly p = testutil::random_poly(rng, 3, 4), q = testutil::random_poly(rng, 3, 3);
  const PolyD lhs = convolve(M, p * Rational(3) + q);
  const PolyD rhs = convolve(M, p) * 3.0 + convolve(M, q);
  const double x[3] = {0.2, 0.1, -0.4};
  CHECK(CompiledPolynomial(lhs)(x) == doctest::Approx(CompiledPolynomial(rhs)(x)).epsilon(1e-13));
}

TEST_CASE("duality of smoothing on forms, 20 randomized instances per group") {
  std::mt19937 rng(21);
  for (const auto& name : testutil::builtin_names()) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    const Mollifier M(G, 0.25);
    double worst = 0.0;
    int used = 0;
    while (used < 20) {
      const int k = 1 + int(rng() % (n - 1));
      PolyForm theta = testutil::random_form(rng, n, k, n > 3 ? 1 : 2);
      PolyForm gamma = testutil::random_form(rng, n, n - k, 1);
      if (theta.is_zero() || gamma.is_zero()) continue;
      worst = std::max(worst, verify_duality(M, theta, BumpForm{centered_bump(n), gamma}));
      ++used;
    }
    CHECK(worst <= 1e-7);
    // left-invariant theta
    CHECK(verify_duality(M, G.coframe()[n - 1], BumpForm{centered_bump(n), sigma_hat(G, 0)}) <= 1e-8);
  }
}

TEST_CASE("duality with interior products") {
  for (const auto& name : {"heisenberg(1)", "engel", "g235"}) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    std::mt19937 rng(4);
    const PolyVectorField X = testutil::random_field(rng, n, 2);
    const int d1 = G.algebra().layer_dim(1);
    for (int m = 0; m <= 4; ++m) {
      const Mollifier M(G, std::ldexp(1.0, -m));
      double worst = 0.0;
      for (int t = d1; t < n; ++t) {
        for (int j = 0; j < d1; ++j) {
          const BumpForm beta{centered_bump(n), sigma_hat(G, j)};
          worst = std::max(worst, verify_interior_duality(M, exterior_derivative(G.coframe()[t]), X, beta));
        }
      }
      CHECK(worst <= 1e-8);
      CHECK(verify_interior_duality(M, exterior_derivative(G.coframe()[n - 1]), G.left_frame()[0],
                                    BumpForm{centered_bump(n), sigma_hat(G, 0)}) <= 1e-8);
    }
    const Mollifier M(G, 0.5);
    const PolyForm not_invariant = G.coframe()[0].map_coefficients([n](const Poly& c) { return c * Poly::variable(n, 1); });
    CHECK_THROWS_AS(verify_interior_duality(M, wedge(not_invariant, G.coframe()[1]), X,
                                            BumpForm{centered_bump(n), sigma_hat(G, 0)}),
                    PreconditionError);
  }
}

TEST_CASE("d commutes with smoothing, finite differences converge at second order") {
  CarnotGroup G(heisenberg(1));
  const Mollifier M(G, 0.5);
  const Poly f = Poly::variable(3, 0) * Poly::variable(3, 0) * Poly::variable(3, 2) + Poly::variable(3, 1);
  const PolyForm theta = G.coframe()[2].map_coefficients([&](const Poly& c) { return c * f; });
  const QuadratureGrid grid({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}, 3);
  const double e1 = verify_d_commutes(M, theta, 1e-2, grid);
  const double e2 = verify_d_commutes(M, theta, 5e-3, grid);
  CHECK(e1 > 0.0);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));
  CHECK(e2 <= 1e-5);
  CHECK(verify_d_commutes(M, G.coframe()[2], 1e-2, grid) <= 1e-12);
  const PolyForm closed = exterior_derivative(PolyForm::basis(3, 0, f));
  CHECK(verify_d_commutes(M, closed, 1e-2, grid) <= 1e-9);
}

TEST_CASE("uniform convergence for a continuous coefficient") {
  CarnotGroup G(heisenberg(1));
  ScalarFunction f = [&G](const double* x) { return G.gauge(std::span<const double>(x, 3)); };
  const QuadratureGrid grid({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}, 4);
  std::vector<double> eps;
  for (int m = 0; m <= 6; ++m) eps.push_back(std::ldexp(1.0, -m));
  const auto table = convergence_table(G, f, eps, grid, 8);
  REQUIRE(table.size() == 7);
  for (std::size_t i = 1; i < table.size(); ++i) {
    CHECK(table[i].sup_error < table[i - 1].sup_error);
    CHECK(table[i].l1_error < table[i - 1].l1_error);
  }
  CHECK(table.back().sup_error < 0.05 * table.front().sup_error);
}

TEST_CASE("shrunk boxes") {
  CarnotGroup G(heisenberg(1));
  const Mollifier M(G, 0.25);
  const auto [lo, hi] = shrunk_box(M, {-1, -1, -1}, {1, 1, 1});
  for (int i = 0; i < 3; ++i) {
    CHECK(lo[i] > -1.0);
    CHECK(hi[i] < 1.0);
    CHECK(lo[i] < hi[i]);
  }
  const Mollifier big(G, 4.0);
  CHECK_THROWS_AS(shrunk_box(big, {-0.1, -0.1, -0.1}, {0.1, 0.1, 0.1}), PreconditionError);
}
