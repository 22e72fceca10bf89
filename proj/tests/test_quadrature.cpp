#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "carnot/kernels.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace carnot;

namespace {

double tanh_sinh_moment(int k) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([k](double u) { return std::pow(u, k) * bump_profile(u); }, -1.0, 1.0);
}

}  // namespace

TEST_CASE("Gauss-Legendre is exact through degree 2q-1") {
  for (int q : {1, 2, 5, 8, 16}) {
    CAPTURE(q);
    const auto r = gauss_legendre(q);
    for (int k = 0; k <= 2 * q - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-14));
    }
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r.nodes[i - 1] < r.nodes[i]);
  }
  const auto c = composite_gauss(8, 3, 0.0, 3.0);
  CHECK(c.size() == 24);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c.weights[i] * std::exp(c.nodes[i]);
  CHECK(s == doctest::Approx(std::exp(3.0) - 1.0).epsilon(1e-10));
}

TEST_CASE("bump mass and moments match an independent tanh-sinh integration") {
  // int exp(-1/(1-u^2)) du over [-1, 1]
  CHECK(bump_mass() == doctest::Approx(0.44399381616807943).epsilon(1e-13));
  const double m0 = tanh_sinh_moment(0);
  const auto& m = bump_moments(40);
  for (int k = 0; k <= 40; k += 2) {
    CAPTURE(k);
    CHECK(m[k] == doctest::Approx(tanh_sinh_moment(k) / m0).epsilon(1e-11));
  }
  CHECK_THROWS_AS(bump_moments(1000), PreconditionError);
}

TEST_CASE("bump-weighted rule integrates moments exactly") {
  const auto& m = bump_moments(60);
  for (int q : {1, 3, 6, 10, 12}) {
    CAPTURE(q);
    const auto r = bump_weighted_rule(q);
    REQUIRE(int(r.size()) == q);
    for (int k = 0; k <= 2 * q - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      CHECK(std::abs(s - m[k]) <= 1e-14);
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(std::abs(r.nodes[i] + r.nodes[r.size() - 1 - i]) <= 1e-15);
      CHECK(r.weights[i] > 0.0);
    }
  }
}

TEST_CASE("tensor grid geometry") {
  QuadratureGrid g({0.0, -1.0}, {2.0, 1.0}, std::vector<int>{3, 4});
  CHECK(g.size() == 12);
  CHECK(g.exactness_degree(0) == 5);
  double vol = 0.0, mx = 0.0;
  double x[2];
  for (std::size_t k = 0; k < g.size(); ++k) {
    vol += g.weight(k);
    g.point(k, x);
    mx += g.weight(k) * x[0] * x[0] * x[1] * x[1];
  }
  CHECK(vol == doctest::Approx(4.0));
  CHECK(mx == doctest::Approx(8.0 / 3.0 * 2.0 / 3.0));
  g.point(1, x);
  double y[2];
  g.point(0, y);
  CHECK(x[0] == y[0]);
  CHECK(x[1] != y[1]);
}

TEST_CASE("polynomial bump integrals match the exact rational oracle") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const Poly p = testutil::random_poly(rng, n, 5, 4);
    std::vector<Rational> c(n), r(n);
    PolyBump phi;
    for (int i = 0; i < n; ++i) {
      c[i] = Rational(int(rng() % 7) - 3, 8);
      r[i] = Rational(1 + int(rng() % 4), 4);
      phi.center.push_back(to_double(c[i]));
      phi.radius.push_back(to_double(r[i]));
    }
    const double exact = to_double(oracle::integrate_against_bump(p, c, r, 4));
    const double got = integrate_against(p.cast<double>(), phi);
    CHECK(std::abs(got - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
    // int p d_i phi = -int (d_i p) phi
    for (int i = 0; i < n; ++i) {
      const double lhs = integrate_against_partial(p.cast<double>(), phi, i);
      const double rhs = -to_double(oracle::integrate_against_bump(p.derivative(i), c, r, 4));
      CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("bump partials agree with finite differences") {
  PolyBump phi{{0.1, -0.2}, {0.5, 0.7}, 4};
  const double x[2] = {0.2, 0.1};
  for (int i = 0; i < 2; ++i) {
    double xp[2] = {x[0], x[1]}, xm[2] = {x[0], x[1]};
    xp[i] += 1e-6;
    xm[i] -= 1e-6;
    CHECK(phi.partial(i, x) == doctest::Approx((phi(xp) - phi(xm)) / 2e-6).epsilon(1e-7));
  }
  const double out[2] = {0.61, 0.0};
  CHECK(phi(out) == 0.0);
}

TEST_CASE("sampled forms: verticality and weight") {
  CarnotGroup G(builtin("engel"));
  const int n = G.dim();
  const QuadratureGrid grid(std::vector<double>(n, -1.0), std::vector<double>(n, 1.0), 3);
  for (int t = 0; t < n; ++t) {
    const auto s = sample_form(G, G.coframe()[t], grid);
    CHECK(is_vertical(G, s) == (G.weights()[t] >= 2));
    const auto w = weight_of(G, s);
    REQUIRE(w.is_homogeneous());
    CHECK(w.value == -G.weights()[t]);
  }
  const auto mixed = sample_form(G, G.coframe()[0] + G.coframe()[3], grid);
  CHECK(weight_of(G, mixed).kind == Weight::Kind::Mixed);
  CHECK_FALSE(is_vertical(G, mixed));
  const auto two = sample_form(G, wedge(G.coframe()[0], G.coframe()[1]), grid);
  CHECK_THROWS_AS(is_vertical(G, two), PreconditionError);
  // i_X of a sampled wedge matches the exact interior product
  const PolyVectorField X = G.right_frame()[1];
  const auto lhs = interior_product(sample_field(G, X, grid), two);
  const auto rhs = sample_form(G, interior_product(X, wedge(G.coframe()[0], G.coframe()[1])), grid);
  for (const auto& [k, v] : rhs.coeffs) {
    const auto it = lhs.coeffs.find(k);
    REQUIRE(it != lhs.coeffs.end());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(it->second[i] == doctest::Approx(v[i]).epsilon(1e-12));
  }
}

TEST_CASE("omp kernels reproduce the serial reference") {
  CarnotGroup G(builtin("g235"));
  const int n = G.dim();
  const QuadratureGrid grid(std::vector<double>(n, -1.0), std::vector<double>(n, 1.0), 7);
  ScalarFunction f = [](const double* x) { return std::cos(x[0] + 0.3 * x[4]) * (1.0 + x[2] * x[3]); };
  const double a = kernels::serial::tensor_sum(grid, f);
  const double b = kernels::omp::tensor_sum(grid, f);
  CHECK(std::abs(a - b) <= 1e-13 * std::abs(a));
  CHECK(kernels::omp::tensor_sum(grid, f) == b);

  VectorFunction v = [n](const double* x, double* out) {
    for (int i = 0; i < n; ++i) out[i] = x[i] * x[(i + 1) % n];
  };
  std::vector<double> s1, s2;
  kernels::serial::sample(grid, v, n, s1);
  kernels::omp::sample(grid, v, n, s2);
  CHECK(s1 == s2);

  const QuadratureGrid yrule(std::vector<double>(n, -0.2), std::vector<double>(n, 0.2), 3);
  std::vector<double> pts;
  for (int t = 0; t < 10; ++t) {
    for (int i = 0; i < n; ++i) pts.push_back(0.05 * (t - 5) + 0.01 * i);
  }
  std::vector<double> c1, c2;
  kernels::serial::convolve(G, yrule, f, pts, c1);
  kernels::omp::convolve(G, yrule, f, pts, c2);
  REQUIRE(c1.size() == 10);
  for (std::size_t t = 0; t < c1.size(); ++t) CHECK(c1[t] == doctest::Approx(c2[t]).epsilon(1e-14));
}
