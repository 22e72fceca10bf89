#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace carnot {

using Rational = mpq_class;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Support or margin requirement violated by a quadrature-based operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied object violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Parses "p", "-p", "p/q" into a canonical rational.
Rational parse_rational(std::string_view text);

/// Canonical "p" or "p/q" rendering.
std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(double v) { return v == 0.0; }

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double v) { return v; }

}  // namespace carnot
