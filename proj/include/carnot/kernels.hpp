#pragma once

#include <vector>

#include "carnot/quadrature.hpp"

namespace carnot::kernels {

// Hot loops of the quadrature layer. The serial versions are the reference; the
// omp versions reduce over fixed-size node blocks in block order, so their results
// do not depend on the thread count.

namespace serial {

/// sum_i w_i f(x_i) over the grid nodes.
double tensor_sum(const QuadratureGrid& grid, const ScalarFunction& f);
/// out[i * ncomp + c] = f(x_i)[c].
void sample(const QuadratureGrid& grid, const VectorFunction& f, int ncomp, std::vector<double>& out);
/// out[t] = sum_k w_k f(y_k^{-1} x_t) for the targets packed as points[t * n + i].
void convolve(const CarnotGroup& G, const QuadratureGrid& yrule, const ScalarFunction& f,
              const std::vector<double>& points, std::vector<double>& out);

}  // namespace serial

namespace omp {

double tensor_sum(const QuadratureGrid& grid, const ScalarFunction& f);
void sample(const QuadratureGrid& grid, const VectorFunction& f, int ncomp, std::vector<double>& out);
void convolve(const CarnotGroup& G, const QuadratureGrid& yrule, const ScalarFunction& f,
              const std::vector<double>& points, std::vector<double>& out);

}  // namespace omp

/// Node block size of the omp reductions.
inline constexpr std::size_t kBlock = 4096;

}  // namespace carnot::kernels
