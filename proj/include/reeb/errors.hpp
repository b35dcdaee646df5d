#pragma once

#include <stdexcept>
#include <string>

namespace reeb {

/// Rejected input: malformed parameters, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A crossing of a symplectic path with the Maslov cycle could not be
/// resolved at the requested refinement.
class UnresolvedCrossing : public NumericalError {
 public:
  UnresolvedCrossing(double t_lo, double t_hi, const std::string& what)
      : NumericalError(what + " in [" + std::to_string(t_lo) + ", " + std::to_string(t_hi) + "]"),
        t_lo_(t_lo),
        t_hi_(t_hi) {}
  double interval_lo() const { return t_lo_; }
  double interval_hi() const { return t_hi_; }

 private:
  double t_lo_;
  double t_hi_;
};

}  // namespace reeb
