#include <cmath>

#include "carnot/contact.hpp"
#include "carnot/weak_contact.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace carnot;

namespace {

std::vector<double> box(int n, double v) { return std::vector<double>(n, v); }

PolyBump rational_bump(const std::vector<Rational>& c, const std::vector<Rational>& r) {
  PolyBump b;
  for (const auto& v : c) b.center.push_back(to_double(v));
  for (const auto& v : r) b.radius.push_back(to_double(v));
  return b;
}

std::vector<PolyD> frame_d(const CarnotGroup& G, const PolyVectorField& Z) {
  std::vector<PolyD> z;
  for (const auto& c : G.frame_coefficients(Z)) z.push_back(c.cast<double>());
  return z;
}

FrameFunction sampled(const CarnotGroup& G, const PolyVectorField& Z) {
  const int n = G.dim();
  return frame_function(G, [Z, n](const double* x, double* v) {
    const auto r = Z.evaluate(std::span<const double>(x, n));
    std::copy(r.begin(), r.end(), v);
  });
}

}  // namespace

TEST_CASE("default family size and geometry") {
  for (const auto& name : testutil::builtin_names()) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim(), d1 = G.algebra().layer_dim(1);
    const auto lo = box(n, -1.0), hi = box(n, 1.0);
    const auto fam = default_test_family(G, lo, hi);
    CHECK(fam.size() == std::size_t((n - d1) * d1 * 9));
    for (const auto& p : fam) {
      for (int i = 0; i < n; ++i) {
        CHECK(p.phi.lo()[i] >= lo[i]);
        CHECK(p.phi.hi()[i] <= hi[i]);
      }
    }
  }
  CarnotGroup H(heisenberg(1));
  CHECK_THROWS_AS(is_weak_contact(H, PolyVectorField(3), std::vector<TestPair>{}, 1e-8), PreconditionError);
  TestPair bad = standard_pair(H, 2, 0, PolyBump{box(3, 0.0), box(3, 0.5), 4});
  bad.eta = H.coframe()[0];
  CHECK_THROWS_AS(weak_residual(H, H.right_frame()[0], bad), PreconditionError);
  CHECK_THROWS_AS(standard_pair(H, 0, 0, bad.phi), PreconditionError);
}

TEST_CASE("x3 X1 on heisenberg: residual matches the exact oracle") {
  CarnotGroup G(heisenberg(1));
  const PolyVectorField Z = Poly::variable(3, 2) * G.left_frame()[0];
  const std::vector<Rational> c{Rational(1, 4), Rational(-1, 8), Rational(1, 4)}, r(3, Rational(1, 2));
  const auto pair = standard_pair(G, 2, 1, rational_bump(c, r));
  // weak = coordinate_sign(1) * (-int R phi) with R = -x3 the (j=2, t=3) contact residual
  const double expected = to_double(oracle::integrate_against_bump(Poly::variable(3, 2), c, r, 4));
  CHECK(std::abs(expected) > 1e-4);
  CHECK(weak_functional(G, Z, pair) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(weak_residual(G, sampled(G, Z), pair) == doctest::Approx(std::abs(expected)).epsilon(1e-12));
  const auto rep = is_weak_contact(G, Z, default_test_family(G, box(3, -1), box(3, 1)), 1e-8);
  CHECK_FALSE(rep.passed);
  CHECK(rep.max_residual >= 10 * 1e-8);
  CHECK(weak_residual(G, PolyVectorField(3), pair) == 0.0);
}

TEST_CASE("coordinate weak residual for z_(2,1) = x1 equals |int x1 X1 phi|") {
  CarnotGroup G(heisenberg(1));
  const std::vector<Rational> c(3, Rational(0)), r(3, Rational(1, 2));
  std::vector<PolyD> z(3, PolyD(3));
  z[2] = Poly::variable(3, 0).cast<double>();
  // int x1 X1 phi = -int phi
  const double expected = to_double(oracle::integrate_against_bump(Poly::constant(3, 1), c, r, 4));
  CHECK(coordinate_weak_residual(G, z, 2, 0, 0, rational_bump(c, r)) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(std::abs(coordinate_weak_functional(G, frame_function(G, z), 2, 0, rational_bump(c, r), 8)) ==
        doctest::Approx(expected).epsilon(1e-13));
  CHECK_THROWS_AS(coordinate_weak_residual(G, z, 3, 0, 0, rational_bump(c, r)), PreconditionError);
  CHECK_THROWS_AS(coordinate_weak_residual(G, z, 2, 1, 0, rational_bump(c, r)), PreconditionError);
}

TEST_CASE("weak and coordinate forms agree up to the fixed sign on 50 random instances") {
  std::mt19937 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& name = testutil::builtin_names()[trial % testutil::builtin_names().size()];
    CarnotGroup G(builtin(name));
    const int n = G.dim(), d1 = G.algebra().layer_dim(1);
    const auto Z = testutil::random_field(rng, n, 3);
    const int t = d1 + int(rng() % (n - d1)), j = int(rng() % d1);
    const int l = G.weights()[t], k = t - G.algebra().layer_offset(l);
    PolyBump phi;
    for (int i = 0; i < n; ++i) {
      phi.center.push_back(0.1 * (int(rng() % 7) - 3));
      phi.radius.push_back(0.2 + 0.1 * (rng() % 4));
    }
    const auto z = frame_d(G, Z);
    const double w = weak_functional(G, z, standard_pair(G, t, j, phi));
    const double c = coordinate_weak_functional(G, z, t, j, phi);
    CHECK(std::abs(coordinate_weak_residual(G, z, l, k, j, phi) - std::abs(c)) <= 1e-15);
    CHECK(std::abs(w - coordinate_sign(j) * c) <= 1e-6 * std::max(std::abs(w), 1e-12));
    // both equal the exact integral of the contact residual
    const auto R = contact_residual(G, Z);
    const auto eqs = contact_equations(G);
    for (std::size_t e = 0; e < eqs.size(); ++e) {
      if (eqs[e].j != j || eqs[e].target != t) continue;
      const double exact = integrate_against(R[e].cast<double>(), phi);
      CHECK(std::abs(c + exact) <= 1e-10 * std::max(1.0, std::abs(exact)));
      ++checked;
    }
  }
  CHECK(checked == 50);
}

TEST_CASE("solved contact fields are weak contact fields; the test detects non-contact fields") {
  for (const auto& name : testutil::builtin_names()) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    const auto fam = default_test_family(G, box(n, -1), box(n, 1));
    const auto sol = solve_contact_fields(G, G.step());
    for (const auto& Z : sol.basis) CHECK(is_weak_contact(G, Z, fam, 1e-8).passed);
    CHECK(is_weak_contact(G, G.dilation_generator(), fam, 1e-8).passed);
    for (const auto& XR : G.right_frame()) CHECK(is_weak_contact(G, sampled(G, XR), fam, 1e-8).passed);
    const PolyVectorField bad = Poly::variable(n, n - 1) * G.left_frame()[0];
    const auto rep = is_weak_contact(G, bad, fam, 1e-8);
    CHECK_FALSE(rep.passed);
    CHECK(rep.max_residual >= 1e-7);
  }
}

TEST_CASE("polynomial and sampled routes agree") {
  std::mt19937 rng(9);
  CarnotGroup G(builtin("engel"));
  const auto fam = default_test_family(G, box(4, -1), box(4, 1));
  const auto Z = testutil::random_field(rng, 4, 3);
  const auto a = is_weak_contact(G, Z, fam, 1e-8);
  const auto b = is_weak_contact(G, sampled(G, Z), fam, 1e-8, 8);
  for (std::size_t p = 0; p < fam.size(); ++p) CHECK(std::abs(a.residuals[p] - b.residuals[p]) <= 1e-12);
  CHECK(a.worst == b.worst);
}

TEST_CASE("linearity in Z, eta and beta") {
  std::mt19937 rng(12);
  CarnotGroup G(builtin("engel"));
  const int n = 4;
  const PolyBump phi{{0.1, 0.0, -0.1, 0.2}, {0.5, 0.4, 0.5, 0.6}, 4};
  const auto Z1 = testutil::random_field(rng, n, 2), Z2 = testutil::random_field(rng, n, 2);
  auto p1 = standard_pair(G, 2, 0, phi), p2 = standard_pair(G, 3, 1, phi);
  const double a = weak_functional(G, Z1, p1), b = weak_functional(G, Z2, p1);
  CHECK(weak_functional(G, Rational(2) * Z1 + Z2, p1) == doctest::Approx(2 * a + b).epsilon(1e-12));
  TestPair sum = p1;
  sum.eta = p1.eta + G.coframe()[3];
  auto p1b = p1;
  p1b.eta = G.coframe()[3];
  CHECK(weak_functional(G, Z1, sum) == doctest::Approx(a + weak_functional(G, Z1, p1b)).epsilon(1e-12));
  TestPair beta_sum = p1;
  beta_sum.beta[1] = Poly::constant(n, 3);
  auto p1c = p1;
  p1c.beta = {Poly(std::size_t(n)), Poly::constant(n, 1)};
  CHECK(weak_functional(G, Z1, beta_sum) == doctest::Approx(a + 3 * weak_functional(G, Z1, p1c)).epsilon(1e-12));
  (void)p2;
}

TEST_CASE("reduction: g eta against beta equals eta against g beta") {
  std::mt19937 rng(31);
  for (const auto& name : {"heisenberg(1)", "engel", "g235"}) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim(), d1 = G.algebra().layer_dim(1);
    const Poly g = testutil::random_poly(rng, n, 2);
    const auto Z = testutil::random_field(rng, n, 2);
    const PolyBump phi{std::vector<double>(n, 0.1), std::vector<double>(n, 0.5), 4};
    for (int t = d1; t < n; ++t) {
      for (int j = 0; j < d1; ++j) {
        auto lhs = standard_pair(G, t, j, phi);
        lhs.eta = lhs.eta.map_coefficients([&g](const Poly& c) { return g * c; });
        auto rhs = standard_pair(G, t, j, phi);
        rhs.beta[j] = g;
        const double a = weak_functional(G, Z, lhs), b = weak_functional(G, Z, rhs);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
        CHECK(std::abs(weak_functional(G, sampled(G, Z), lhs, 10) - a) <= 1e-10);
      }
    }
  }
}

TEST_CASE("invariance under pullback by a contact map with change of variables") {
  std::mt19937 rng(5);
  CarnotGroup G(heisenberg(1));
  const int n = 3;
  for (const auto& F : {G.left_translation({Rational(1, 3), Rational(-1, 4), Rational(1, 5)}), G.dilation(Rational(3, 2))}) {
    CAPTURE(F.label);
    const PolyMap Finv = F.inverse_map();
    const auto Zt = testutil::random_field(rng, n, 2);
    const auto Z = pushforward(Finv, Zt);
    const PolyBump phi{{0.2, 0.1, 0.0}, {0.3, 0.3, 0.3}, 4};
    const auto J = F.jacobian();
    TestFunction tf;
    tf.value = [F, phi](const double* x) {
      const auto y = F.evaluate(std::span<const double>(x, 3));
      return phi(y.data());
    };
    tf.gradient = [F, J, phi](const double* x, double* g) {
      const auto y = F.evaluate(std::span<const double>(x, 3));
      for (int i = 0; i < 3; ++i) {
        g[i] = 0.0;
        for (int k = 0; k < 3; ++k) g[i] += J[k][i].evaluate<double>(std::span<const double>(x, 3)) * phi.partial(k, y.data());
      }
    };
    // bounding box of F^-1(supp phi)
    tf.lo.assign(3, 1e9);
    tf.hi.assign(3, -1e9);
    for (int corner = 0; corner < 8; ++corner) {
      std::vector<double> y(3);
      for (int i = 0; i < 3; ++i) y[i] = phi.center[i] + ((corner >> i) & 1 ? 1 : -1) * phi.radius[i];
      const auto x = Finv.evaluate(std::span<const double>(y));
      for (int i = 0; i < 3; ++i) {
        tf.lo[i] = std::min(tf.lo[i], x[i]);
        tf.hi[i] = std::max(tf.hi[i], x[i]);
      }
    }
    const auto zf = sampled(G, Z);
    for (int j = 0; j < 2; ++j) {
      const double target = weak_functional(G, Zt, standard_pair(G, 2, j, phi));
      const double pulled = weak_functional(G, zf, pullback(F, G.coframe()[2]), pullback(F, sigma_hat(G, j)), tf, 8, 10);
      CHECK(std::abs(target) > 1e-5);
      CHECK(std::abs(pulled - target) <= 1e-6 * std::abs(target));
    }
  }
}

TEST_CASE("mollification stability") {
  for (const auto& name : {"heisenberg(1)", "g235"}) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    const auto sol = solve_contact_fields(G, 2);
    for (double eps : {0.25, 0.125}) {
      for (std::size_t i = 0; i < sol.basis.size(); i += 3) {
        const auto rep = verify_mollification_stability(G, sol.basis[i], eps, box(n, -1), box(n, 1), 1e-7);
        CHECK(rep.stable());
        CHECK(rep.lo[0] > -1.0);
      }
      const PolyVectorField bad = Poly::variable(n, n - 1) * G.left_frame()[0];
      const auto rep = verify_mollification_stability(G, bad, eps, box(n, -1), box(n, 1), 1e-7);
      CHECK_FALSE(rep.before.passed);
      CHECK_FALSE(rep.after.passed);
      CHECK(rep.after.max_residual >= 1e-6);
    }
    const auto same = verify_mollification_stability(G, G.right_frame()[0], 0.25, box(n, -1), box(n, 1), 1e-8);
    CHECK(same.stable());
  }
}

TEST_CASE("pushforward by contact maps") {
  CarnotGroup G(heisenberg(1));
  const auto sol = solve_contact_fields(G, 2);
  const auto lo = box(3, -1), hi = box(3, 1);
  const auto L = numeric_map(G.left_translation({Rational(1, 2), Rational(-1, 3), Rational(1, 5)}));
  for (const auto& XR : G.right_frame()) {
    const auto r = verify_pushforward(G, L, XR, lo, hi, 1e-8);
    CHECK(r.report.passed);
    CHECK(r.horizontality_defect <= 1e-12);
  }
  const auto D = numeric_map(G.dilation(2));
  for (const auto& r : verify_pushforward(G, D, sol.basis, lo, hi, 1e-8)) CHECK(r.report.passed);
  const PolyVectorField W = sol.basis.back();
  const auto F = flow_map(flow_spec(W), 1.0);
  for (const auto& XR : G.right_frame()) CHECK(verify_pushforward(G, F, XR, lo, hi, 1e-6).report.passed);
  const PolyVectorField bad = Poly::variable(3, 2) * G.left_frame()[0];
  CHECK_FALSE(verify_pushforward(G, D, bad, lo, hi, 1e-8).report.passed);
  // right translation by a vertical-free element moves the horizontal bundle
  const auto R = numeric_map(G.right_translation({Rational(1, 2), Rational(0), Rational(0)}));
  CHECK_THROWS_AS(verify_pushforward(G, R, G.right_frame()[0], lo, hi, 1e-8), PreconditionError);
  const auto T = pushforward_box(L, lo, hi);
  for (const auto& y : std::vector<std::vector<double>>{T.first, T.second}) {
    const auto x = L.apply_inverse(y);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i]) <= 1.0);
  }
}

TEST_CASE("report formatting") {
  WeakContactReport r;
  r.residuals = {1e-9, 3e-9};
  r.labels = {"a", "b"};
  r.max_residual = 3e-9;
  r.worst = 1;
  r.tol = 1e-8;
  r.passed = true;
  const auto m = format_report(r, true);
  CHECK(m.find("max_residual=3.000000e-09\n") != std::string::npos);
  CHECK(m.find("verdict=pass\n") != std::string::npos);
  CHECK(m.find("worst=b\n") != std::string::npos);
  CHECK(format_report(r).find("weak contact: yes") != std::string::npos);
}
