#pragma once

#include <stdexcept>
#include <string>

namespace jre {

/// Shapes of two operands (or the members of a tuple) disagree.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Simultaneous triangularization of a commuting tuple failed on every draw.
struct TriangularizationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The brute-force oracle only covers dimensions up to 3.
struct UnsupportedDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

} // namespace jre
