#pragma once

#include <stdexcept>
#include <string>

namespace qid {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (schema, masses, grids).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Zero detection could not separate a genuine zero from a grazing minimum.
class IndeterminateError : public Error {
 public:
  IndeterminateError(const std::string& what, double location, double modulus)
      : Error(what), location_(location), modulus_(modulus) {}
  double location() const { return location_; }
  double modulus() const { return modulus_; }

 private:
  double location_;
  double modulus_;
};

/// A numerical procedure did not converge or violated a checked identity.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Phase tracking ran out of bisections; carries the offending interval.
class RefinementError : public NumericalError {
 public:
  RefinementError(const std::string& what, double lo, double hi)
      : NumericalError(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// The lattice characteristic function vanishes somewhere on its period.
class PeriodZeroError : public Error {
 public:
  PeriodZeroError(const std::string& what, double location, double modulus)
      : Error(what), location_(location), modulus_(modulus) {}
  double location() const { return location_; }
  double modulus() const { return modulus_; }

 private:
  double location_;
  double modulus_;
};

}  // namespace qid
