#include "opaa/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "opaa/errors.hpp"

namespace opaa {

namespace {

inline double log_normal_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace

void GmmModel::validate() const {
  if (clusters < 1) throw InvalidArgument("GMM: clusters must be >= 1");
  if (!(prior_sigma > 0.0) || !std::isfinite(prior_sigma)) {
    throw InvalidArgument("GMM: prior_sigma must be finite and > 0");
  }
  if (!(obs_sigma > 0.0) || !std::isfinite(obs_sigma)) {
    throw InvalidArgument("GMM: obs_sigma must be finite and > 0");
  }
  for (std::size_t i = 0; i < observations.size(); ++i) {
    if (!std::isfinite(observations[i])) {
      throw InvalidArgument("GMM: observation " + std::to_string(i) + " is not finite");
    }
  }
}

double gmm_log_joint(const GmmModel& model, std::span<const double> mu) {
  const auto k_count = static_cast<std::size_t>(model.clusters);
  if (mu.size() != k_count) {
    throw InvalidArgument("gmm_log_joint: expected " + std::to_string(k_count) + " means, got " +
                          std::to_string(mu.size()));
  }
  std::vector<double> sorted(mu.begin(), mu.end());
  std::sort(sorted.begin(), sorted.end());

  double lp = 0.0;
  for (double m : sorted) lp += log_normal_pdf(m, 0.0, model.prior_sigma);

  const double log_k = std::log(static_cast<double>(k_count));
  std::vector<double> terms(k_count);
  for (double x : model.observations) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < k_count; ++k) {
      terms[k] = log_normal_pdf(x, sorted[k], model.obs_sigma);
      top = std::max(top, terms[k]);
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - top);
    lp += top + std::log(s) - log_k;
  }
  return lp;
}

GmmDataset gmm_sample_dataset(int clusters, double prior_sigma, double obs_sigma, int n,
                              std::uint64_t seed) {
  GmmModel{clusters, prior_sigma, obs_sigma, {}}.validate();
  if (n < 0) throw InvalidArgument("gmm_sample_dataset: n must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> standard(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, clusters - 1);
  GmmDataset out;
  out.mu_true.reserve(static_cast<std::size_t>(clusters));
  for (int k = 0; k < clusters; ++k) out.mu_true.push_back(prior_sigma * standard(rng));
  out.observations.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double centre = out.mu_true[static_cast<std::size_t>(pick(rng))];
    out.observations.push_back(centre + obs_sigma * standard(rng));
  }
  return out;
}

GaussianMoments gmm_single_cluster_posterior(const GmmModel& model) {
  model.validate();
  if (model.clusters != 1) {
    throw InvalidArgument("gmm_single_cluster_posterior: model must have exactly one cluster");
  }
  const double prior_prec = 1.0 / (model.prior_sigma * model.prior_sigma);
  const double obs_prec = 1.0 / (model.obs_sigma * model.obs_sigma);
  double sum = 0.0;
  for (double x : model.observations) sum += x;
  const double prec = prior_prec + static_cast<double>(model.observations.size()) * obs_prec;
  return {sum * obs_prec / prec, 1.0 / std::sqrt(prec)};
}

}  // namespace opaa
