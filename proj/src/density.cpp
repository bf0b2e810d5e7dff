#include "opaa/density.hpp"

#include <cmath>

#include "opaa/errors.hpp"
#include "opaa/hermite.hpp"

namespace opaa {

ApproxDensity::ApproxDensity(CoefficientSet coeffs) : coeffs_(std::move(coeffs)) {
  if (!(coeffs_.total_energy() > 0.0)) {
    throw DegenerateTargetError("cannot build a density from coefficients with zero energy");
  }
  coeffs_.for_each([&](const Coefficient& c) { max_entry_ = std::max(max_entry_, c.tau.max_entry()); });
}

double ApproxDensity::operator()(std::span<const double> theta) const {
  const auto dim = static_cast<std::size_t>(coeffs_.dim());
  if (theta.size() != dim) throw InvalidArgument("ApproxDensity: point has wrong dimension");
  const std::size_t stride = max_entry_ + 1;
  std::vector<double> psi(dim * stride);
  for (std::size_t k = 0; k < dim; ++k) {
    hermite_psi_all(theta[k], std::span<double>(psi.data() + k * stride, stride));
  }
  double p = 0.0;
  coeffs_.for_each([&](const Coefficient& c) {
    double term = c.value;
    for (std::size_t k = 0; k < dim; ++k) term *= psi[k * stride + c.tau[k]];
    p += term;
  });
  return p * p / coeffs_.total_energy();
}

double ApproxDensity::in_original_coordinates(std::span<const double> x,
                                              const AffineMap& map) const {
  std::vector<double> theta(x.size());
  map.inverse(x, theta);
  return (*this)(theta) * std::exp(-map.log_jacobian());
}

ApproxDensity build_density(CoefficientSet coeffs) { return ApproxDensity(std::move(coeffs)); }

}  // namespace opaa
