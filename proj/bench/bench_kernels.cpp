#include <benchmark/benchmark.h>

#include <cmath>

#include "carnot/kernels.hpp"

using namespace carnot;

namespace {

const CarnotGroup& group() {
  static const CarnotGroup G(builtin("g235"));
  return G;
}

double integrand(const double* x) { return std::cos(x[0] + 0.3 * x[4]) * (1.0 + x[2] * x[3]); }

QuadratureGrid grid(int q) { return QuadratureGrid(std::vector<double>(5, -1.0), std::vector<double>(5, 1.0), q); }

std::vector<double> targets(int count) {
  std::vector<double> pts;
  for (int t = 0; t < count; ++t) {
    for (int i = 0; i < 5; ++i) pts.push_back(0.01 * (t % 17) - 0.08 + 0.02 * i);
  }
  return pts;
}

template <bool Parallel>
void BM_tensor_sum(benchmark::State& state) {
  const auto g = grid(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kernels::omp::tensor_sum(g, integrand)
                                      : kernels::serial::tensor_sum(g, integrand));
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}

template <bool Parallel>
void BM_sample(benchmark::State& state) {
  const auto g = grid(int(state.range(0)));
  VectorFunction f = [](const double* x, double* out) {
    for (int i = 0; i < 5; ++i) out[i] = x[i] * x[(i + 1) % 5];
  };
  std::vector<double> out;
  for (auto _ : state) {
    if (Parallel) {
      kernels::omp::sample(g, f, 5, out);
    } else {
      kernels::serial::sample(g, f, 5, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}

template <bool Parallel>
void BM_convolve(benchmark::State& state) {
  const QuadratureGrid yrule(std::vector<double>(5, -0.2), std::vector<double>(5, 0.2), 4);
  const auto pts = targets(int(state.range(0)));
  std::vector<double> out;
  for (auto _ : state) {
    if (Parallel) {
      kernels::omp::convolve(group(), yrule, integrand, pts, out);
    } else {
      kernels::serial::convolve(group(), yrule, integrand, pts, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * yrule.size());
}

}  // namespace

BENCHMARK(BM_tensor_sum<false>)->Name("tensor_sum/serial")->Arg(6)->Arg(10);
BENCHMARK(BM_tensor_sum<true>)->Name("tensor_sum/omp")->Arg(6)->Arg(10);
BENCHMARK(BM_sample<false>)->Name("sample/serial")->Arg(6)->Arg(10);
BENCHMARK(BM_sample<true>)->Name("sample/omp")->Arg(6)->Arg(10);
BENCHMARK(BM_convolve<false>)->Name("convolve/serial")->Arg(16)->Arg(64);
BENCHMARK(BM_convolve<true>)->Name("convolve/omp")->Arg(16)->Arg(64);

BENCHMARK_MAIN();
