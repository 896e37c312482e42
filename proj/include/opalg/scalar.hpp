#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace opalg {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
using Scalar = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Accepts "p", "-p", "p/q" (q != 0) with optional surrounding whitespace.
Scalar parse_scalar(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Scalar& value);

}  // namespace opalg
