#include "carnot/polynomial.hpp"

#include <sstream>

namespace carnot {

namespace {

void enumerate_weighted(std::span<const int> w, std::size_t i, int remaining, Monomial& cur,
                        std::vector<Monomial>& out) {
  if (i == w.size()) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  for (int e = 0; e * w[i] <= remaining; ++e) {
    cur[i] = static_cast<std::uint16_t>(e);
    enumerate_weighted(w, i + 1, remaining - e * w[i], cur, out);
  }
  cur[i] = 0;
}

Interval mul(Interval a, Interval b) {
  const double p[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval ipow(Interval a, int k) {
  if (k == 0) return {1.0, 1.0};
  if (k % 2 == 0) {
    const double m = std::max(std::abs(a.lo), std::abs(a.hi));
    const double lo = (a.lo <= 0.0 && a.hi >= 0.0) ? 0.0 : std::min(std::abs(a.lo), std::abs(a.hi));
    return {std::pow(lo, k), std::pow(m, k)};
  }
  return {std::pow(a.lo, k), std::pow(a.hi, k)};
}

template <class T>
std::string format_impl(const Polynomial<T>& p, std::span<const int> weights, const std::string& var) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Monomial, T>> terms(p.terms().begin(), p.terms().end());
  if (!weights.empty()) {
    WeightedMonomialLess less{weights};
    std::stable_sort(terms.begin(), terms.end(),
                     [&](const auto& a, const auto& b) { return less(a.first, b.first); });
  }
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    const bool negative = c < 0;
    T mag = negative ? T(-c) : c;
    const bool unit_monomial = total_degree(m) == 0;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    std::string coeff;
    if constexpr (std::is_same_v<T, double>) {
      std::ostringstream cs;
      cs.precision(17);
      cs << mag;
      coeff = cs.str();
    } else {
      coeff = to_string(mag);
    }
    const bool is_one = (mag == T(1));
    if (unit_monomial) {
      os << coeff;
    } else {
      if (!is_one) os << coeff << "*";
      os << format_monomial(m, var);
    }
  }
  return os.str();
}

}  // namespace

std::vector<Monomial> monomials_of_weighted_degree(std::span<const int> weights, int degree) {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  Monomial cur(weights.size(), 0);
  enumerate_weighted(weights, 0, degree, cur, out);
  std::sort(out.begin(), out.end(), WeightedMonomialLess{weights});
  return out;
}

double CompiledPolynomial::operator()(const double* x) const {
  // small power table per variable
  constexpr int kStack = 16 * 24;
  double stack_pows[kStack];
  std::vector<double> heap_pows;
  const int stride = max_exp_ + 1;
  double* pows = stack_pows;
  if (int(nvars_) * stride > kStack) {
    heap_pows.resize(nvars_ * stride);
    pows = heap_pows.data();
  }
  for (std::size_t i = 0; i < nvars_; ++i) {
    double* row = pows + i * stride;
    row[0] = 1.0;
    for (int k = 1; k < stride; ++k) row[k] = row[k - 1] * x[i];
  }
  double acc = 0.0;
  const std::uint16_t* e = exps_.data();
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    double v = coeffs_[t];
    for (std::size_t i = 0; i < nvars_; ++i, ++e) {
      if (*e) v *= pows[i * stride + *e];
    }
    acc += v;
  }
  return acc;
}

Interval bound_over_box(const Polynomial<double>& p, std::span<const double> lo,
                        std::span<const double> hi) {
  Interval acc{0.0, 0.0};
  for (const auto& [m, c] : p.terms()) {
    Interval t{c, c};
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i]) t = mul(t, ipow({lo[i], hi[i]}, m[i]));
    }
    acc.lo += t.lo;
    acc.hi += t.hi;
  }
  return acc;
}

std::string format_monomial(const Monomial& m, const std::string& var) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    if (!first) os << "*";
    first = false;
    os << var << (i + 1);
    if (m[i] > 1) os << "^" << m[i];
  }
  if (first) os << "1";
  return os.str();
}

std::string format_polynomial(const Polynomial<Rational>& p, std::span<const int> weights,
                              const std::string& var) {
  return format_impl(p, weights, var);
}

std::string format_polynomial(const Polynomial<double>& p, std::span<const int> weights,
                              const std::string& var) {
  return format_impl(p, weights, var);
}

}  // namespace carnot
