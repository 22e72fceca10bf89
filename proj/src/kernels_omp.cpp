#include <algorithm>

#include "carnot/kernels.hpp"

namespace carnot::kernels::omp {

double tensor_sum(const QuadratureGrid& grid, const ScalarFunction& f) {
  const std::size_t nblocks = (grid.size() + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel
  {
    std::vector<double> x(grid.dim());
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < std::ptrdiff_t(nblocks); ++b) {
      const std::size_t end = std::min(grid.size(), (b + 1) * kBlock);
      double acc = 0.0;
      for (std::size_t i = b * kBlock; i < end; ++i) {
        grid.point(i, x.data());
        acc += grid.weight(i) * f(x.data());
      }
      partial[b] = acc;
    }
  }
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

void sample(const QuadratureGrid& grid, const VectorFunction& f, int ncomp, std::vector<double>& out) {
  out.assign(grid.size() * ncomp, 0.0);
#pragma omp parallel
  {
    std::vector<double> x(grid.dim());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(grid.size()); ++i) {
      grid.point(i, x.data());
      f(x.data(), out.data() + i * ncomp);
    }
  }
}

void convolve(const CarnotGroup& G, const QuadratureGrid& yrule, const ScalarFunction& f,
              const std::vector<double>& points, std::vector<double>& out) {
  const int n = G.dim();
  const std::size_t count = points.size() / n;
  out.assign(count, 0.0);
  // the y nodes are shared by all targets
  std::vector<double> ys(yrule.size() * n), ws(yrule.size());
  for (std::size_t k = 0; k < yrule.size(); ++k) {
    yrule.point(k, ys.data() + k * n);
    for (int i = 0; i < n; ++i) ys[k * n + i] = -ys[k * n + i];
    ws[k] = yrule.weight(k);
  }
#pragma omp parallel
  {
    std::vector<double> z(n);
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t t = 0; t < std::ptrdiff_t(count); ++t) {
      double acc = 0.0;
      for (std::size_t k = 0; k < yrule.size(); ++k) {
        G.product(ys.data() + k * n, points.data() + t * n, z.data());
        acc += ws[k] * f(z.data());
      }
      out[t] = acc;
    }
  }
}

}  // namespace carnot::kernels::omp
