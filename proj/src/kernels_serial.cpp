#include "carnot/kernels.hpp"

namespace carnot::kernels::serial {

double tensor_sum(const QuadratureGrid& grid, const ScalarFunction& f) {
  std::vector<double> x(grid.dim());
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, x.data());
    acc += grid.weight(i) * f(x.data());
  }
  return acc;
}

void sample(const QuadratureGrid& grid, const VectorFunction& f, int ncomp, std::vector<double>& out) {
  out.assign(grid.size() * ncomp, 0.0);
  std::vector<double> x(grid.dim());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, x.data());
    f(x.data(), out.data() + i * ncomp);
  }
}

void convolve(const CarnotGroup& G, const QuadratureGrid& yrule, const ScalarFunction& f,
              const std::vector<double>& points, std::vector<double>& out) {
  const int n = G.dim();
  const std::size_t count = points.size() / n;
  out.assign(count, 0.0);
  std::vector<double> y(n), z(n);
  for (std::size_t t = 0; t < count; ++t) {
    double acc = 0.0;
    for (std::size_t k = 0; k < yrule.size(); ++k) {
      yrule.point(k, y.data());
      for (auto& v : y) v = -v;
      G.product(y.data(), points.data() + t * n, z.data());
      acc += yrule.weight(k) * f(z.data());
    }
    out[t] = acc;
  }
}

}  // namespace carnot::kernels::serial
