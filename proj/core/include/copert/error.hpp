#pragma once

#include <stdexcept>
#include <string>

namespace copert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A floating-point intermediate became non-finite or an iteration stalled.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (word enumeration, memo table, moment degree) was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A word does not have the run structure an estimate requires.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A series whose tail could not be certified as geometric.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// No two-sided radius bracket exists for the given profile.
class BracketFailure : public Error {
 public:
  BracketFailure(const std::string& what, double kappa0, double eta)
      : Error(what), kappa0_(kappa0), eta_(eta) {}

  double kappa0() const noexcept { return kappa0_; }
  double eta() const noexcept { return eta_; }

 private:
  double kappa0_;
  double eta_;
};

}  // namespace copert
