#pragma once

#include <stdexcept>
#include <string>

namespace qturing {

/// Operand shapes do not conform (dimension mismatch, bad interface split).
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical precondition failed: the operator is not an isometry/unitary
/// within tolerance. Carries the measured defect.
class ContractError : public std::domain_error {
 public:
  ContractError(const std::string& what, double defect)
      : std::domain_error(what), defect_(defect) {}

  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// The kernel-image factorization residual exceeded its bound.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Malformed automaton or rule file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qturing
