#ifndef OPAA_DENSITY_HPP
#define OPAA_DENSITY_HPP

#include <span>
#include <vector>

#include "opaa/coefficients.hpp"
#include "opaa/target.hpp"

namespace opaa {

/// pi(theta) = [sum_tau a_tau prod_k psi_{tau_k}(theta_k)]^2 / sum_tau a_tau^2.
///
/// Non-negative and integrates to one for any non-empty coefficient set.
class ApproxDensity {
 public:
  /// Throws DegenerateTargetError when the set has zero energy.
  explicit ApproxDensity(CoefficientSet coeffs);

  int dim() const noexcept { return coeffs_.dim(); }
  double normalization() const noexcept { return coeffs_.total_energy(); }
  const CoefficientSet& coefficients() const noexcept { return coeffs_; }

  double operator()(std::span<const double> theta) const;

  /// Density in the coordinates of the original target when the
  /// coefficients were computed through `map`: pi(map^{-1}(x)) / prod(scale).
  double in_original_coordinates(std::span<const double> x, const AffineMap& map) const;

 private:
  CoefficientSet coeffs_;
  unsigned max_entry_ = 0;
};

ApproxDensity build_density(CoefficientSet coeffs);

}  // namespace opaa

#endif  // OPAA_DENSITY_HPP
