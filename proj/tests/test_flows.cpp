#include <cmath>

#include "carnot/contact.hpp"
#include "carnot/flows.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace carnot;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

FlowSpec invariant_spec(const CarnotGroup& G, const std::vector<double>& v, bool right) {
  PolyVectorField Z(G.dim());
  for (int a = 0; a < G.dim(); ++a) {
    PolyVectorField X = right ? G.right_frame()[a] : G.left_frame()[a];
    Z += Rational(int(std::lround(v[a] * 1000)), 1000) * X;
  }
  return flow_spec(Z);
}

}  // namespace

TEST_CASE("flows of invariant fields follow the group law") {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> u(-400, 400);
  for (const auto& name : {"heisenberg(1)", "engel", "g235"}) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> v(n), x(n);
      for (int i = 0; i < n; ++i) {
        v[i] = u(rng) / 1000.0;
        x[i] = u(rng) / 1000.0;
      }
      const std::vector<double> e(n, 0.0);
      // exp is the identity in exponential coordinates
      CHECK(max_diff(flow(invariant_spec(G, v, false), e, 1.0), v) <= 1e-9);
      CHECK(max_diff(flow(invariant_spec(G, v, false), x, 1.0), G.product(x, v)) <= 1e-9);
      CHECK(max_diff(flow(invariant_spec(G, v, true), x, 1.0), G.product(v, x)) <= 1e-9);
      CHECK(flow(invariant_spec(G, v, true), x, 0.0) == x);
    }
  }
}

TEST_CASE("flow group law, variational Jacobian, and reversibility") {
  CarnotGroup G(heisenberg(1));
  const auto sol = solve_contact_fields(G, 2);
  const FlowSpec Z = flow_spec(sol.basis.back());
  const std::vector<double> x{0.2, -0.1, 0.3};
  CHECK(max_diff(flow(Z, flow(Z, x, 0.3), 0.4), flow(Z, x, 0.7)) <= 1e-9);
  CHECK(max_diff(flow(Z, flow(Z, x, 0.5), -0.5), x) <= 1e-9);
  const auto [y, J] = flow_with_jacobian(Z, x, 0.6);
  CHECK(max_diff(y, flow(Z, x, 0.6)) <= 1e-10);
  double gap = 0.0;
  const auto Jfd = fd_jacobian(
      [&Z](const double* p, double* out) {
        const auto r = flow(Z, std::span<const double>(p, 3), 0.6);
        std::copy(r.begin(), r.end(), out);
      },
      3, x.data(), 1e-5, &gap);
  CHECK(max_diff(J, Jfd) <= 1e-7);
  CHECK(gap <= 1e-6);
  // without DZ the variational equation uses finite differences
  FlowSpec noj = Z;
  noj.field_jacobian.reset();
  CHECK(max_diff(flow_with_jacobian(noj, x, 0.6).second, J) <= 1e-7);
}

TEST_CASE("flow errors") {
  CarnotGroup G(heisenberg(1));
  PolyVectorField blow(3);
  blow[0] = Poly::variable(3, 0) * Poly::variable(3, 0);
  FlowSpec s = flow_spec(blow);
  const std::vector<double> x{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(flow(s, x, 2.0), DomainError);
  FlowSpec boxed = flow_spec(G.right_frame()[0]);
  boxed.box = std::make_pair(std::vector<double>(3, -0.5), std::vector<double>(3, 0.5));
  CHECK_THROWS_AS(flow(boxed, std::vector<double>(3, 0.0), 1.0), DomainError);
  CHECK_THROWS_AS(flow(boxed, std::vector<double>(2, 0.0), 1.0), DimensionMismatch);
}

TEST_CASE("flows of solved contact fields are contact maps") {
  for (const auto& name : {"heisenberg(1)", "engel"}) {
    CAPTURE(name);
    CarnotGroup G(builtin(name));
    const int n = G.dim();
    const auto sol = solve_contact_fields(G, 2);
    std::mt19937 rng(6);
    for (std::size_t i = 0; i < sol.basis.size(); i += 4) {
      const auto f = flow_map(flow_spec(sol.basis[i]), 0.3);
      std::vector<double> x(n);
      for (auto& v : x) v = 0.1 * (int(rng() % 9) - 4);
      CHECK(horizontality_defect(G, f, x) <= 1e-8);
    }
    const auto g = flow_map(flow_spec(G.left_frame()[1]), 0.4);
    CHECK(horizontality_defect(G, g, std::vector<double>(n, 0.1)) >= 1e-2);
  }
}

TEST_CASE("right-invariant chart on heisenberg matches the group product") {
  CarnotGroup G(heisenberg(1));
  std::vector<FlowSpec> X;
  for (const auto& XR : G.right_frame()) X.push_back(flow_spec(XR));
  const std::vector<double> p{0.1, 0.2, -0.3};
  const FlowChart C(X, p);
  CHECK(C.forward(std::vector<double>(3, 0.0)) == p);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  double worst = 0.0, worst_rt = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> t{u(rng), u(rng), u(rng)};
    // exp(t1 e1) exp(t2 e2) exp(t3 e3) p
    std::vector<double> e1{t[0], 0, 0}, e2{0, t[1], 0}, e3{0, 0, t[2]};
    const auto closed = G.product(e1, G.product(e2, G.product(e3, p)));
    worst = std::max(worst, max_diff(C.forward(t), closed));
    worst_rt = std::max(worst_rt, max_diff(C.inverse(C.forward(t)), t));
  }
  CHECK(worst <= 1e-9);
  CHECK(worst_rt <= 1e-7);
  CHECK(C.valid_radius() > 0.1);
  // the right-invariant chart is global on heisenberg
  const auto far = C.inverse(std::vector<double>{50.0, 0.0, 1e6});
  CHECK(max_diff(C.forward(far), {50.0, 0.0, 1e6}) <= 1e-9 * 1e6);
  // x3' = 1 - x3^2 keeps x3 in (-1, 1)
  PolyVectorField squeeze(3);
  squeeze[2] = Poly::constant(3, 1) - Poly::variable(3, 2) * Poly::variable(3, 2);
  const FlowChart B({X[0], X[1], flow_spec(squeeze)}, std::vector<double>(3, 0.0));
  CHECK_THROWS_AS(B.inverse(std::vector<double>{0.0, 0.0, 5.0}), DomainError);
  std::vector<FlowSpec> dependent{X[0], X[0], X[2]};
  CHECK_THROWS_AS(FlowChart(dependent, p), PreconditionError);
}

TEST_CASE("conjugacy of flows") {
  CarnotGroup G(heisenberg(1));
  const std::vector<double> x{0.2, -0.3, 0.1};
  const auto L = numeric_map(G.left_translation({Rational(1, 2), Rational(1, 3), Rational(-1, 4)}));
  for (const auto& XR : G.right_frame()) CHECK(verify_conjugacy(G, L, flow_spec(XR), x, 0.7) <= 1e-9);
  CHECK(verify_conjugacy(G, identity_numeric(3), flow_spec(G.right_frame()[0]), x, 0.5) == 0.0);
  const auto sol = solve_contact_fields(G, 2);
  const auto D = numeric_map(G.dilation(2));
  std::mt19937 rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    const auto& Z = sol.basis[rng() % sol.basis.size()];
    std::vector<double> y{0.1 * (int(rng() % 7) - 3), 0.1 * (int(rng() % 7) - 3), 0.1 * (int(rng() % 7) - 3)};
    for (double t : {0.1, -0.1, 0.2, -0.2}) {
      const double d = verify_conjugacy(G, D, flow_spec(Z), y, t);
      CHECK(d <= 1e-7);
      CHECK(std::abs(d - verify_conjugacy(G, D, flow_spec(Z), y, -t)) <= 1e-7);
    }
  }
}

TEST_CASE("contact maps are the identity in flow charts") {
  CarnotGroup G(heisenberg(1));
  std::vector<FlowSpec> X;
  for (const auto& XR : G.right_frame()) X.push_back(flow_spec(XR));
  const std::vector<double> p{0.1, 0.0, -0.2};
  const auto id = verify_identity_in_chart(identity_numeric(3), p, X);
  CHECK(id.max_error <= 1e-12);
  CHECK(id.points == 125);
  const auto L = numeric_map(G.left_translation({Rational(1, 2), Rational(-1, 3), Rational(1, 5)}));
  CHECK(verify_identity_in_chart(L, p, X).max_error <= 1e-7);
  const auto sol = solve_contact_fields(G, 2);
  const auto F = flow_map(flow_spec(sol.basis.back()), 0.5);
  const auto rep = verify_identity_in_chart(F, p, X);
  CHECK(rep.max_error <= 1e-6);
  CHECK(rep.valid_radius >= 0.1);
}

TEST_CASE("numeric maps compose with their inverses and differentials") {
  CarnotGroup G(builtin("engel"));
  const auto L = numeric_map(G.left_translation({Rational(1), Rational(-1, 2), Rational(1, 3), Rational(0)}));
  const auto D = numeric_map(G.dilation(Rational(3, 2)));
  const auto C = compose(D, L);
  const std::vector<double> x{0.1, 0.2, -0.3, 0.4};
  CHECK(max_diff(C.apply_inverse(C(x)), x) <= 1e-13);
  double gap = 0.0;
  const auto Jfd = fd_jacobian(C.forward, 4, x.data(), 1e-5, &gap);
  CHECK(max_diff(C.differential(x), Jfd) <= 1e-8);
  CHECK_THROWS_AS(numeric_map(PolyMap{{Poly::variable(1, 0)}, std::nullopt, "f"}), PreconditionError);
}
