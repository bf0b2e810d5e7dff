#include "opaa/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "opaa/errors.hpp"
#include "opaa/hermite.hpp"

namespace opaa {

GaussianIdentity::GaussianIdentity(int dim) : dim_(dim) {
  if (dim < 1) throw InvalidArgument("GaussianIdentity: dimension must be >= 1");
}

double GaussianIdentity::log_density(std::span<const double> theta) const {
  double r2 = 0.0;
  for (double t : theta) r2 += t * t;
  return -r2 - 0.5 * dim_ * std::log(std::numbers::pi);
}

// ---------------------------------------------------------------------------

PlantedDensity::PlantedDensity(int dim, std::vector<Coefficient> coeffs)
    : dim_(dim), coeffs_(std::move(coeffs)) {
  if (dim < 1) throw InvalidArgument("PlantedDensity: dimension must be >= 1");
  std::set<MultiIndex> seen;
  for (const auto& c : coeffs_) {
    if (c.tau.dim() != static_cast<std::size_t>(dim)) {
      throw InvalidArgument("PlantedDensity: multi-index dimension mismatch");
    }
    if (!std::isfinite(c.value)) throw InvalidArgument("PlantedDensity: non-finite coefficient");
    if (!seen.insert(c.tau).second) throw InvalidArgument("PlantedDensity: duplicate multi-index");
    max_entry_ = std::max(max_entry_, c.tau.max_entry());
  }
}

template <class Fn>
double PlantedDensity::sum_terms(std::span<const double> theta, Fn&& basis) const {
  const auto dim = static_cast<std::size_t>(dim_);
  const std::size_t stride = max_entry_ + 1;
  std::vector<double> vals(dim * stride);
  for (std::size_t k = 0; k < dim; ++k) basis(theta[k], std::span<double>(vals.data() + k * stride, stride));
  double s = 0.0;
  for (const auto& c : coeffs_) {
    double term = c.value;
    for (std::size_t k = 0; k < dim; ++k) term *= vals[k * stride + c.tau[k]];
    s += term;
  }
  return s;
}

double PlantedDensity::log_density(std::span<const double> theta) const {
  const double s = sum_terms(theta, [](double x, std::span<double> out) { hermite_psi_all(x, out); });
  if (s == 0.0) return -std::numeric_limits<double>::infinity();
  return 2.0 * std::log(std::abs(s));
}

double PlantedDensity::q(std::span<const double> theta) const {
  return sum_terms(theta, [](double x, std::span<double> out) { hermite_h_all(x, out); });
}

double PlantedDensity::planted_evidence() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += c.value * c.value;
  return s;
}

double PlantedDensity::min_on_box(double half_width, int points_per_axis) const {
  if (!(half_width > 0.0) || points_per_axis < 2) {
    throw InvalidArgument("PlantedDensity::min_on_box: need half_width > 0 and >= 2 points");
  }
  const auto m = static_cast<std::size_t>(points_per_axis);
  const double step = 2.0 * half_width / static_cast<double>(m - 1);
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim_), 0);
  std::vector<double> theta(static_cast<std::size_t>(dim_), -half_width);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    best = std::min(best, q(theta));
    std::size_t k = idx.size();
    while (k-- > 0) {
      if (++idx[k] < m) {
        theta[k] = -half_width + step * static_cast<double>(idx[k]);
        break;
      }
      idx[k] = 0;
      theta[k] = -half_width;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return best;
}

double PlantedDensity::min_on_grid(const TensorGrid& grid) const {
  if (grid.dim() != dim_) throw InvalidArgument("PlantedDensity::min_on_grid: dimension mismatch");
  double best = std::numeric_limits<double>::infinity();
  grid.for_each(0, grid.size(), [&](std::uint64_t, std::span<const int>, std::span<const double> x) {
    best = std::min(best, q(x));
  });
  return best;
}

// ---------------------------------------------------------------------------

GmmTarget::GmmTarget(GmmModel model) : model_(std::move(model)) { model_.validate(); }

double GmmTarget::log_density(std::span<const double> mu) const {
  return gmm_log_joint(model_, mu);
}

AffineMap gmm_data_preconditioner(const GmmModel& model, double spread) {
  model.validate();
  if (!(spread > 0.0)) throw InvalidArgument("gmm_data_preconditioner: spread must be > 0");
  const auto k = static_cast<std::size_t>(model.clusters);
  if (model.clusters == 1) {
    const GaussianMoments post = gmm_single_cluster_posterior(model);
    const double mean[1] = {post.mean};
    const double sd[1] = {spread * post.sd};
    return AffineMap::from_moments(mean, sd);
  }
  const auto& xs = model.observations;
  if (xs.empty()) {
    return AffineMap::from_moments(std::vector<double>(k, 0.0),
                                   std::vector<double>(k, spread * model.prior_sigma));
  }
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  // The posterior is a set of blobs of width ~w spread over a region of
  // half-width ~extent. A Hermite expansion of degree D resolves both when
  // the map scale sits at their geometric mean.
  const double n = static_cast<double>(xs.size());
  const double width = model.obs_sigma / std::sqrt(std::max(1.0, n / static_cast<double>(k)));
  double extent = 0.0;
  if (xs.size() < k) {
    // Some cluster has no data and its mean ranges over the prior.
    extent = model.prior_sigma;
  } else {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    extent = 0.5 * (*hi - *lo) + model.obs_sigma;
  }
  const double sd = spread * std::sqrt(width * extent);
  return AffineMap::from_moments(std::vector<double>(k, mean), std::vector<double>(k, sd));
}

}  // namespace opaa
