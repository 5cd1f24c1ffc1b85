#pragma once

#include <stdexcept>
#include <string>

namespace pcadc {

/// Input violates a precondition (non-finite entries, shape mismatch, bad parameters).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization required full column rank and did not get it.
class RankDeficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested a closed-form conjugate or subgradient rule the table does not carry.
class NotInTable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point lies outside the subdifferential domain of the function.
class OutOfDomain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An inner s-by-s matrix lost rank along a solver trajectory.
class SingularInnerMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcadc
