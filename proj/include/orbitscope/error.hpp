#pragma once

#include <stdexcept>
#include <string>

namespace orbitscope {

struct Inertia {
  int positive = 0;
  int negative = 0;
  int nullity = 0;

  int dimension() const { return positive + negative + nullity; }
  int rank() const { return positive + negative; }
  bool operator==(const Inertia&) const = default;
};

inline std::string to_string(const Inertia& in) {
  return "(" + std::to_string(in.positive) + "," + std::to_string(in.negative) + "," +
         std::to_string(in.nullity) + ")";
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input.
class InputError : public Error {
 public:
  using Error::Error;
};

class EmptyOrbitError : public InputError {
 public:
  using InputError::InputError;
};

// A decision fell inside the tolerance band. Both readings are kept so the
// caller can report them.
class AmbiguityError : public Error {
 public:
  AmbiguityError(const std::string& what, Inertia as_zero = {}, Inertia as_nonzero = {},
                 double margin = 0.0)
      : Error(what), as_zero_(as_zero), as_nonzero_(as_nonzero), margin_(margin) {}

  const Inertia& as_zero() const { return as_zero_; }
  const Inertia& as_nonzero() const { return as_nonzero_; }
  double margin() const { return margin_; }

 private:
  Inertia as_zero_;
  Inertia as_nonzero_;
  double margin_;
};

// An internal cross-check disagreed (tolerance failure or broken input).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class FormulaViolation : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

// Slice/frame construction left its region of validity.
class ChartError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbitscope
