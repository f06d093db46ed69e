#pragma once

#include <stdexcept>
#include <string>

namespace subqaoa {

/// Malformed inputs: dimension mismatches, invalid words, broken invariants.
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Infeasible or ill-formed problem constraints (e.g. Hamming weight out of range).
struct ConstraintError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds a configured size limit (dense materialization, oracle scale).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical self-check failed beyond its tolerance; results are not trustworthy.
struct NumericalIntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File or serialization failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace subqaoa
