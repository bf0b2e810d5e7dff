#ifndef OPAA_ERRORS_HPP
#define OPAA_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace opaa {

/// Bad arguments: empty inputs, out-of-range indices, invalid orders.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function returned a non-finite value where a finite one is required.
/// Carries the offending point.
class NumericalDomainError : public std::domain_error {
 public:
  NumericalDomainError(const std::string& what, std::vector<double> point)
      : std::domain_error(what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

/// A size limit was hit (integer overflow, memory cap, oracle dimension).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Every quadrature node saw P == 0, so the evidence estimate is zero.
class DegenerateTargetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opaa

#endif  // OPAA_ERRORS_HPP
