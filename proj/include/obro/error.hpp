#pragma once

#include <stdexcept>
#include <string>

namespace obro {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad partition, mismatched
/// sizes, out-of-range coordinate, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A solver could not deliver an optimal answer where one was required.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// The decision polyhedron is empty.
class ProblemInfeasible : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

/// An enumeration oracle was asked to do more work than its budget allows.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace obro
