#pragma once

#include <stdexcept>
#include <string>

namespace simiter {

/// A caller broke an operation's precondition (shape mismatch, bad parameter).
class ContractError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method ran out of iterations or sweeps.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The iterate block lost rank (or overflowed) during subspace iteration.
class RankCollapseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The leading k x k block of the rotated sketch is numerically singular.
class SingularBlockError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace simiter
