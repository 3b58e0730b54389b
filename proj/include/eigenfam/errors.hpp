#pragma once

#include <stdexcept>
#include <string>

namespace eigenfam {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point or step lies outside the admissible parameter domain of a chart.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Singular or indefinite metric, vanishing denominator in an identity, etc.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Raised by guarded field evaluators (zero-modulus or small-denominator
// guards). Sweeps count these as excluded points, not failures.
class ExcludedPoint : public Error {
 public:
  using Error::Error;
};

// Malformed input: bad weights, non-integral dual vectors, non-homogeneous
// polynomials, inconsistent family metadata.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace eigenfam
