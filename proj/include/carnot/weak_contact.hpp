#pragma once

#include <string>
#include <vector>

#include "carnot/flows.hpp"
#include "carnot/mollifier.hpp"

namespace carnot {

/// eta a vertical 1-form (dx basis); beta = phi * sum_i beta_i sigma-hat_(1,i).
struct TestPair {
  PolyForm eta;
  PolyBump phi;
  std::vector<Poly> beta;
  std::string label;
};

/// (sigma_t, phi * sigma-hat_(1,j)); t a flat index in layer >= 2, j a layer-1 slot.
TestPair standard_pair(const CarnotGroup& G, int t, int j, const PolyBump& phi);

/// Bumps at three dyadic scales h 2^-s (s = 1, 2, 3) and three translates
/// c + tau omega (h - r), tau in {-1, 0, 1}, omega_i = (-1)^i (0.3 + 0.4 i/n).
std::vector<PolyBump> default_bumps(const std::vector<double>& lo, const std::vector<double>& hi);
/// Every sigma_t with t in layer >= 2, against every sigma-hat_(1,j) and every default bump.
std::vector<TestPair> default_test_family(const CarnotGroup& G, const std::vector<double>& lo,
                                          const std::vector<double>& hi);

/// Frame coefficients z_a(x) of a field sampled pointwise.
using FrameFunction = std::function<void(const double*, double*)>;
/// Frame coefficients of a field given by coordinate components.
FrameFunction frame_function(const CarnotGroup& G, const VectorFunction& coords);
FrameFunction frame_function(const CarnotGroup& G, const std::vector<PolyD>& z);

/// int i_Z(d eta) ^ beta - int i_Z(eta) ^ d beta (signed). Z given by frame coefficients.
/// The polynomial overloads integrate exactly against the bump; the sampled one uses a
/// tensor Gauss rule of `order` nodes per axis on the bump's box.
double weak_functional(const CarnotGroup& G, const std::vector<PolyD>& z, const TestPair& pair);
double weak_functional(const CarnotGroup& G, const PolyVectorField& Z, const TestPair& pair);
double weak_functional(const CarnotGroup& G, const FrameFunction& z, const TestPair& pair,
                       int order = default_grid_order());

double weak_residual(const CarnotGroup& G, const std::vector<PolyD>& z, const TestPair& pair);
double weak_residual(const CarnotGroup& G, const PolyVectorField& Z, const TestPair& pair);
double weak_residual(const CarnotGroup& G, const FrameFunction& z, const TestPair& pair,
                     int order = default_grid_order());

/// Test function with gradient, supported in [lo, hi].
struct TestFunction {
  ScalarFunction value;
  VectorFunction gradient;
  std::vector<double> lo, hi;
};

/// The same functional for beta = phi * gamma with gamma any (n-1)-form in the dx basis and phi
/// an arbitrary test function; composite Gauss of `order` x `panels` per axis on phi's box.
double weak_functional(const CarnotGroup& G, const FrameFunction& z, const PolyForm& eta, const PolyForm& gamma,
                       const TestFunction& phi, int order, int panels);

/// int z_t X_(1,j) phi + sum_a C^t_(a,j) int z_a phi with [e_a, e_j] = sum_t C^t_(a,j) e_t.
/// For smooth Z it equals -int R phi, R the (j, t) contact residual. With eta = sigma_t and
/// beta = phi sigma-hat_(1,j) the weak functional is coordinate_sign(j) times this value.
double coordinate_weak_functional(const CarnotGroup& G, const std::vector<PolyD>& z, int t, int j,
                                  const PolyBump& phi);
double coordinate_weak_functional(const CarnotGroup& G, const FrameFunction& z, int t, int j, const PolyBump& phi,
                                  int order = default_grid_order());
/// Layer/slot form: t is the slot k (0-based) of layer l >= 2.
double coordinate_weak_residual(const CarnotGroup& G, const std::vector<PolyD>& z, int l, int k, int j,
                                const PolyBump& phi);
/// -(-1)^j for the 0-based layer-1 slot j.
int coordinate_sign(int j);

struct WeakContactReport {
  std::vector<double> residuals;
  std::vector<std::string> labels;
  double max_residual = 0.0;
  std::size_t worst = 0;
  double tol = 0.0;
  bool passed = false;
};

WeakContactReport is_weak_contact(const CarnotGroup& G, const std::vector<PolyD>& z,
                                  const std::vector<TestPair>& family, double tol);
WeakContactReport is_weak_contact(const CarnotGroup& G, const PolyVectorField& Z,
                                  const std::vector<TestPair>& family, double tol);
/// Sampled route; samples z once per distinct bump and reuses them across pairs.
WeakContactReport is_weak_contact(const CarnotGroup& G, const FrameFunction& z, const std::vector<TestPair>& family,
                                  double tol, int order = default_grid_order());

std::string format_report(const WeakContactReport& r, bool machine = false);

struct StabilityReport {
  WeakContactReport before;
  WeakContactReport after;
  double eps = 0.0;
  std::vector<double> lo, hi;
  bool stable() const { return before.passed && after.passed; }
};

/// Tests Z on [lo, hi], then Z^eps on the box shrunk by the support of rho_eps, each with
/// the default family of its box and the same tolerance.
StabilityReport verify_mollification_stability(const CarnotGroup& G, const PolyVectorField& Z, double eps,
                                               const std::vector<double>& lo, const std::vector<double>& hi,
                                               double tol);

struct PushforwardReport {
  WeakContactReport report;
  std::vector<double> lo, hi;
  double horizontality_defect = 0.0;
};

/// f_* Z = Df Z o f^-1 sampled on a box around f(c) whose preimage lies in [lo, hi].
/// Throws PreconditionError when Df fails to preserve the horizontal bundle or reverses
/// orientation, DomainError when no target box is found.
std::vector<PushforwardReport> verify_pushforward(const CarnotGroup& G, const NumericMap& f,
                                                  const std::vector<PolyVectorField>& Z, const std::vector<double>& lo,
                                                  const std::vector<double>& hi, double tol,
                                                  int order = default_grid_order());
PushforwardReport verify_pushforward(const CarnotGroup& G, const NumericMap& f, const PolyVectorField& Z,
                                     const std::vector<double>& lo, const std::vector<double>& hi, double tol,
                                     int order = default_grid_order());

/// Target box of verify_pushforward.
std::pair<std::vector<double>, std::vector<double>> pushforward_box(const NumericMap& f, const std::vector<double>& lo,
                                                                    const std::vector<double>& hi);

}  // namespace carnot
