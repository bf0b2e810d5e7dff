#ifndef OPAA_GMM_HPP
#define OPAA_GMM_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace opaa {

/// One-dimensional Gaussian mixture with K equally weighted clusters:
///   mu_k ~ N(0, prior_sigma^2),  x_i | mu ~ (1/K) sum_k N(mu_k, obs_sigma^2).
struct GmmModel {
  int clusters = 1;
  double prior_sigma = 1.0;
  double obs_sigma = 1.0;
  std::vector<double> observations;

  /// Throws InvalidArgument on clusters < 1, non-positive sigmas or
  /// non-finite observations.
  void validate() const;
};

/// log P(mu_1..mu_K, x_1..x_n): the Gaussian prior on every mean plus the
/// log mixture likelihood of every observation, using log-sum-exp. The means
/// are sorted before summation so the value is bitwise invariant under
/// relabeling.
double gmm_log_joint(const GmmModel& model, std::span<const double> mu);

struct GmmDataset {
  std::vector<double> mu_true;
  std::vector<double> observations;
};

/// Draws the means from N(0, prior_sigma^2), then each observation from a
/// uniformly chosen cluster. Fully determined by the seed.
GmmDataset gmm_sample_dataset(int clusters, double prior_sigma, double obs_sigma, int n,
                              std::uint64_t seed);

/// Cluster means drawn in the three-cluster, n = 1000 reference run. Used as a
/// fixed regression input.
inline constexpr std::array<double, 3> kReferenceClusterMeans = {-18.61, 3.81, 8.84};

/// Conjugate posterior N(mean, sd^2) of the single mean when clusters == 1.
struct GaussianMoments {
  double mean = 0.0;
  double sd = 1.0;
};
GaussianMoments gmm_single_cluster_posterior(const GmmModel& model);

}  // namespace opaa

#endif  // OPAA_GMM_HPP
