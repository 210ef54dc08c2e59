#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spsched {

/// Malformed references or broken type invariants: unknown job id, machine
/// index out of range, duplicate permutation entry, and the like.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A solver or transformation declining to run: enumeration budget exceeded,
/// precondition unmet, shift outside its doable range.
struct SolverRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An identity that must hold by construction failed. Always a bug.
struct InvariantBreach : std::logic_error {
  using std::logic_error::logic_error;
};

/// Raised when an operation requiring a feasible schedule is handed one that
/// fails validation; carries the rendered violation list.
struct InfeasibleScheduleError : std::runtime_error {
  InfeasibleScheduleError(const std::string& msg, std::vector<std::string> v)
      : std::runtime_error(msg), violations(std::move(v)) {}
  std::vector<std::string> violations;
};

}  // namespace spsched
