#ifndef OPAA_ORACLE_HPP
#define OPAA_ORACLE_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "opaa/gmm.hpp"

// Brute-force reference integration. Nothing here touches quadrature rules,
// Hermite polynomials or the transform.

namespace opaa::oracle {

/// Axis-aligned box with a per-axis point count for composite Simpson.
struct BoxSpec {
  std::vector<double> lo;
  std::vector<double> hi;
  int points_per_axis = 2001;

  /// Throws InvalidArgument on mismatched sizes, lo >= hi or fewer than 2
  /// points.
  void validate() const;
  int dim() const noexcept { return static_cast<int>(lo.size()); }
};

struct OracleResult {
  double value = 0.0;
  double refinement_delta = 0.0;  // |S(h) - S(h/2)|
  int points_per_axis = 0;        // odd count actually used for S(h)
};

/// Raised when halving the Simpson step moves the estimate by more than the
/// acceptance tolerance.
class RefinementError : public std::runtime_error {
 public:
  RefinementError(const std::string& what, OracleResult partial)
      : std::runtime_error(what), partial_(partial) {}
  const OracleResult& partial() const noexcept { return partial_; }

 private:
  OracleResult partial_;
};

inline constexpr double kRefinementTolerance = 1e-8;

/// Tensor-product composite Simpson estimate of the integral of f over the
/// box (point count rounded up to odd), accepted only if the estimate with
/// half the step agrees to kRefinementTolerance relative to the integral of
/// |f|. Returns the refined estimate.
///
/// Throws CapacityError for dimension > 3, RefinementError when the check
/// fails.
OracleResult integrate_box(const std::function<double(std::span<const double>)>& f,
                           const BoxSpec& box);

/// Integral of exp(gmm_log_joint) over the box, i.e. the evidence P(x_1..x_n)
/// in unexpanded product form. Requires clusters <= 2 and a box that covers
/// [min x - 8 obs_sigma, max x + 8 obs_sigma] on every axis.
OracleResult gmm_evidence_direct(const GmmModel& model, const BoxSpec& box);

/// Box covering the observations +- 8 obs_sigma and the prior +- 10
/// prior_sigma on each of the model's axes.
BoxSpec gmm_default_box(const GmmModel& model, int points_per_axis = 2001);

/// Closed-form marginal likelihood for a single cluster: the observations are
/// jointly N(0, obs_sigma^2 I + prior_sigma^2 11^T).
double gmm_single_cluster_evidence(const GmmModel& model);

}  // namespace opaa::oracle

#endif  // OPAA_ORACLE_HPP
