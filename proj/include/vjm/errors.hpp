#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace vjm {

// Malformed model input: non-orthonormal rotation, size mismatch, bad axis.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// rank(J_theta) < 6: the springs of the chain do not constrain every
// end-frame direction, so the chain without passive joints is not stiff.
class SingularChainError : public std::runtime_error {
 public:
  SingularChainError(const std::string& what, int rank)
      : std::runtime_error(what), rank_(rank) {}

  int rank() const noexcept { return rank_; }

 private:
  int rank_;
};

// A passive column that is dependent on earlier ones, or that lies in the
// null space of the current stiffness. column() is the 0-based column index
// in the passive Jacobian (-1 when the offending column is not isolated).
class RedundantJointError : public std::runtime_error {
 public:
  RedundantJointError(const std::string& what, int column)
      : std::runtime_error(what), column_(column) {}

  int column() const noexcept { return column_; }

 private:
  int column_;
};

// A wrench with a component along a direction the stiffness does not resist.
class UnresistedWrenchError : public std::runtime_error {
 public:
  UnresistedWrenchError(const std::string& what, std::array<double, 6> direction)
      : std::runtime_error(what), direction_(direction) {}

  const std::array<double, 6>& direction() const noexcept { return direction_; }

 private:
  std::array<double, 6> direction_;
};

}  // namespace vjm
