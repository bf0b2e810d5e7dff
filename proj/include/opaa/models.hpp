#ifndef OPAA_MODELS_HPP
#define OPAA_MODELS_HPP

#include <span>
#include <vector>

#include "opaa/coefficients.hpp"
#include "opaa/gmm.hpp"
#include "opaa/quadrature.hpp"
#include "opaa/target.hpp"

namespace opaa {

/// P(theta) = pi^{-N/2} e^{-|theta|^2}. Its only nonzero coefficient is
/// a_0 = 1.
class GaussianIdentity final : public TargetDensity {
 public:
  explicit GaussianIdentity(int dim);
  int dim() const override { return dim_; }
  double log_density(std::span<const double> theta) const override;

 private:
  int dim_;
};

/// P(theta) = q(theta)^2 e^{-|theta|^2} with q = sum_tau c_tau phi_tau.
/// Where q > 0 the coefficients of sqrt(P) are exactly the c_tau, and the
/// evidence is sum c_tau^2 regardless of sign.
class PlantedDensity final : public TargetDensity {
 public:
  /// Throws InvalidArgument on dimension mismatch, duplicate multi-indices
  /// or non-finite coefficients.
  PlantedDensity(int dim, std::vector<Coefficient> coeffs);

  int dim() const override { return dim_; }
  const std::vector<Coefficient>& coefficients() const noexcept { return coeffs_; }

  /// 2 log|q(theta)| - |theta|^2, from Hermite-function products. -inf where
  /// q == 0.
  double log_density(std::span<const double> theta) const override;

  /// The polynomial q itself.
  double q(std::span<const double> theta) const;

  /// sum c_tau^2.
  double planted_evidence() const;

  /// Smallest q over a uniform tensor grid on [-half_width, half_width]^N.
  double min_on_box(double half_width, int points_per_axis = 10'000) const;

  /// Smallest q over the nodes of a quadrature grid.
  double min_on_grid(const TensorGrid& grid) const;

 private:
  template <class Fn>
  double sum_terms(std::span<const double> theta, Fn&& basis) const;

  int dim_;
  std::vector<Coefficient> coeffs_;
  unsigned max_entry_ = 0;
};

/// The mixture joint density as a function of the K cluster means.
class GmmTarget final : public TargetDensity {
 public:
  explicit GmmTarget(GmmModel model);
  int dim() const override { return model_.clusters; }
  double log_density(std::span<const double> mu) const override;
  const GmmModel& model() const noexcept { return model_; }

 private:
  GmmModel model_;
};

/// Per-coordinate map that puts the mixture posterior under the Hermite
/// weight. With one cluster it matches the conjugate posterior exactly.
/// Otherwise every coordinate is centred on the observation mean with
/// standard deviation sqrt(width * extent), where width = obs_sigma /
/// sqrt(max(1, n / K)) and extent is half the data range plus obs_sigma
/// (prior_sigma when n < K), times `spread`. Without observations the prior
/// is used.
AffineMap gmm_data_preconditioner(const GmmModel& model, double spread = 1.0);

}  // namespace opaa

#endif  // OPAA_MODELS_HPP
