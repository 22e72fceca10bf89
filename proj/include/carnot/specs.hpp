#pragma once

#include <string>

#include "carnot/flows.hpp"

namespace carnot {

/// Polynomial in x1..xn: sums, products, powers x2^3, parentheses, rationals 3/4.
Poly parse_polynomial(const std::string& text, int n);

/// Field specs:
///   right:i        right-invariant frame field X^R_i (1-based)
///   left:i         left-invariant frame field X_i
///   dilation       generator of the dilations
///   kernel:D:i     i-th element of the solved contact kernel at degree D
///   poly:p1;...;pn coordinate components
///   frame:z1;...;zn coefficients against the left-invariant frame
PolyVectorField parse_field_spec(const CarnotGroup& G, const std::string& spec);

/// Map specs, composed right to left with '@' (f@g = f o g):
///   identity | left:a1,...,an | dilation:t | flow:<field spec>:<time>
NumericMap parse_map_spec(const CarnotGroup& G, const std::string& spec);

/// Comma-separated numbers.
std::vector<double> parse_point(const std::string& text);

}  // namespace carnot
