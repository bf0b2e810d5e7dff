#ifndef OPAA_TRANSFORM_HPP
#define OPAA_TRANSFORM_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "opaa/coefficients.hpp"
#include "opaa/hermite.hpp"
#include "opaa/multiindex.hpp"
#include "opaa/quadrature.hpp"
#include "opaa/target.hpp"

namespace opaa {

// The transform coefficient of a target P is
//
//   a_tau = integral sqrt(P(x)) phi_tau(x) prod_k e^{-x_k^2/2} dx,
//
// with phi_tau = prod_k h_{tau_k}(x_k). Both grid weightings estimate the same
// integral as sum_j W_j g_j phi_tau(x_j):
//
//   kHalfGaussian: x_j, W_j from the sqrt(2)-scaled rule, g_j = sqrt(P(x_j)).
//   kHermite:      x_j, W_j from the raw rule, g_j = sqrt(P(x_j)) e^{|x_j|^2/2}.
//
// kHermite is exact whenever sqrt(P) e^{|x|^2/2} phi_tau is a polynomial of
// per-coordinate degree <= 2*order - 1; kHalfGaussian only converges as the
// order grows.

inline constexpr std::uint64_t kDefaultMaxStoredSamples = 100'000'000;

/// g at one node. Throws NumericalDomainError if log_density is NaN or +inf.
double root_sample(const TargetDensity& target, std::span<const double> x,
                   GridWeighting weighting);

/// g_j for every grid node in odometer order (weights not applied).
/// Throws CapacityError if the grid has more than max_samples nodes.
std::vector<double> sample_root_density(const TargetDensity& target, const TensorGrid& grid,
                                        unsigned workers = 1,
                                        std::uint64_t max_samples = kDefaultMaxStoredSamples);

/// One coefficient by streaming over the grid, evaluating the target at each
/// node. The table must be built on grid.axis_nodes() and cover max(tau).
double coefficient_naive(const TargetDensity& target, const TensorGrid& grid,
                         const HermiteTable& table, const MultiIndex& tau);

/// Streaming evaluation of several coefficients at once. The grid is cut into
/// fixed-size chunks; partial sums are combined in ascending chunk order, so
/// the result does not depend on `workers`.
std::vector<double> coefficients_streaming(const TargetDensity& target, const TensorGrid& grid,
                                           const HermiteTable& table,
                                           std::span<const MultiIndex> taus,
                                           unsigned workers = 1);

/// All coefficients with min_degree <= |tau| <= max_degree from stored
/// samples, by contracting one axis at a time with B[d][i] = W_i h_d(x_i).
/// Returned in shell order (degree ascending, reverse-lexicographic within a
/// shell). Each coefficient's arithmetic is fixed, so the result does not
/// depend on `workers`.
std::vector<Coefficient> contract_samples(std::span<const double> samples, const TensorGrid& grid,
                                          const HermiteTable& table, unsigned min_degree,
                                          unsigned max_degree, unsigned workers = 1);

/// Every a_tau with |tau| <= max_degree via sample_root_density followed by
/// contract_samples. Throws CapacityError when the grid exceeds max_samples.
CoefficientSet coefficients_contracted(const TargetDensity& target, const TensorGrid& grid,
                                       const HermiteTable& table, unsigned max_degree,
                                       unsigned workers = 1,
                                       std::uint64_t max_samples = kDefaultMaxStoredSamples);

enum class CoefficientPath {
  kAuto,        // contraction when the samples fit under max_stored_samples
  kContracted,
  kStreaming,
};

enum class StopReason {
  kConverged,  // two consecutive shells each carried <= tol * total energy
  kMaxDegree,
};

struct OpaaOptions {
  int quad_order = 8;
  double tol = 1e-8;
  int max_degree = 20;
  std::optional<AffineMap> precondition;
  unsigned workers = 1;
  GridWeighting weighting = GridWeighting::kHermite;
  CoefficientPath path = CoefficientPath::kAuto;
  std::uint64_t max_stored_samples = kDefaultMaxStoredSamples;
};

struct OpaaResult {
  CoefficientSet coefficients;
  double evidence = 0.0;
  StopReason stop = StopReason::kMaxDegree;
  int max_degree_reached = 0;
  CoefficientPath path_used = CoefficientPath::kContracted;

  bool converged() const noexcept { return stop == StopReason::kConverged; }
};

/// Degree-incremental transform. For d = 0, 1, ...: extend the Hermite table
/// to degree d, compute the whole shell |tau| = d, add its energy. Stops once
/// two consecutive shells each hold <= tol * total energy, or at max_degree.
///
/// Throws InvalidArgument for bad options and DegenerateTargetError if the
/// total energy is zero at the end (every node saw P == 0).
OpaaResult run_opaa(const TargetDensity& target, const OpaaOptions& options);

}  // namespace opaa

#endif  // OPAA_TRANSFORM_HPP
