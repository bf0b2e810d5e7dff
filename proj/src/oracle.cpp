#include "opaa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "opaa/errors.hpp"

namespace opaa::oracle {

namespace {

// Composite Simpson weights for m (odd) points on [lo, hi].
std::vector<double> simpson_weights(double lo, double hi, int m) {
  const double h = (hi - lo) / (m - 1);
  std::vector<double> w(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double c = (i == 0 || i == m - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[static_cast<std::size_t>(i)] = c * h / 3.0;
  }
  return w;
}

struct SimpsonSums {
  double value = 0.0;
  double abs_value = 0.0;
};

// Tensor Simpson with m points per axis. Slabs along the first axis are summed
// separately and then combined in ascending order.
SimpsonSums simpson(const std::function<double(std::span<const double>)>& f, const BoxSpec& box,
                    int m) {
  const auto dim = static_cast<std::size_t>(box.dim());
  std::vector<std::vector<double>> w(dim);
  std::vector<std::vector<double>> x(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    w[k] = simpson_weights(box.lo[k], box.hi[k], m);
    x[k].resize(static_cast<std::size_t>(m));
    const double h = (box.hi[k] - box.lo[k]) / (m - 1);
    for (int i = 0; i < m; ++i) x[k][static_cast<std::size_t>(i)] = box.lo[k] + h * i;
    x[k].back() = box.hi[k];
  }

  SimpsonSums total;
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> pt(dim);
  const auto mm = static_cast<std::size_t>(m);
  for (std::size_t slab = 0; slab < mm; ++slab) {
    SimpsonSums part;
    std::fill(idx.begin(), idx.end(), 0);
    idx[0] = slab;
    for (;;) {
      double wt = 1.0;
      for (std::size_t k = 0; k < dim; ++k) {
        pt[k] = x[k][idx[k]];
        wt *= w[k][idx[k]];
      }
      const double v = f(pt);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os.precision(17);
        os << "oracle integrand is not finite at (";
        for (std::size_t k = 0; k < dim; ++k) os << (k ? ", " : "") << pt[k];
        os << ")";
        throw NumericalDomainError(os.str(), pt);
      }
      part.value += wt * v;
      part.abs_value += wt * std::abs(v);
      std::size_t k = dim;
      while (k-- > 1) {
        if (++idx[k] < mm) break;
        idx[k] = 0;
      }
      if (k == 0) break;
    }
    total.value += part.value;
    total.abs_value += part.abs_value;
  }
  return total;
}

}  // namespace

void BoxSpec::validate() const {
  if (lo.empty() || lo.size() != hi.size()) {
    throw InvalidArgument("BoxSpec: lo and hi must be non-empty and the same length");
  }
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]) || !(lo[k] < hi[k])) {
      throw InvalidArgument("BoxSpec: need finite lo < hi on axis " + std::to_string(k));
    }
  }
  if (points_per_axis < 2) throw InvalidArgument("BoxSpec: need at least 2 points per axis");
}

OracleResult integrate_box(const std::function<double(std::span<const double>)>& f,
                           const BoxSpec& box) {
  box.validate();
  if (box.dim() > 3) {
    throw CapacityError("oracle integration is limited to 3 dimensions, got " +
                        std::to_string(box.dim()));
  }
  const int m = box.points_per_axis % 2 == 1 ? box.points_per_axis : box.points_per_axis + 1;
  const SimpsonSums coarse = simpson(f, box, m);
  const SimpsonSums fine = simpson(f, box, 2 * m - 1);

  OracleResult r;
  r.value = fine.value;
  r.refinement_delta = std::abs(fine.value - coarse.value);
  r.points_per_axis = m;
  const double scale = fine.abs_value;
  if (r.refinement_delta > kRefinementTolerance * scale) {
    std::ostringstream os;
    os.precision(3);
    os << "oracle refused: halving the Simpson step changed the estimate by "
       << r.refinement_delta << " (relative " << r.refinement_delta / scale
       << "); increase points_per_axis";
    throw RefinementError(os.str(), r);
  }
  return r;
}

BoxSpec gmm_default_box(const GmmModel& model, int points_per_axis) {
  model.validate();
  double lo = -10.0 * model.prior_sigma;
  double hi = 10.0 * model.prior_sigma;
  if (!model.observations.empty()) {
    const auto [mn, mx] = std::minmax_element(model.observations.begin(), model.observations.end());
    lo = std::min(lo, *mn - 8.0 * model.obs_sigma);
    hi = std::max(hi, *mx + 8.0 * model.obs_sigma);
  }
  const auto k = static_cast<std::size_t>(model.clusters);
  return {std::vector<double>(k, lo), std::vector<double>(k, hi), points_per_axis};
}

OracleResult gmm_evidence_direct(const GmmModel& model, const BoxSpec& box) {
  model.validate();
  box.validate();
  if (model.clusters > 2) {
    throw InvalidArgument("gmm_evidence_direct supports at most 2 clusters");
  }
  if (box.dim() != model.clusters) {
    throw InvalidArgument("box dimension must equal the number of clusters");
  }
  if (!model.observations.empty()) {
    const auto [mn, mx] = std::minmax_element(model.observations.begin(), model.observations.end());
    const double need_lo = *mn - 8.0 * model.obs_sigma;
    const double need_hi = *mx + 8.0 * model.obs_sigma;
    for (int k = 0; k < box.dim(); ++k) {
      if (box.lo[k] > need_lo || box.hi[k] < need_hi) {
        std::ostringstream os;
        os << "box axis " << k << " [" << box.lo[k] << ", " << box.hi[k]
           << "] does not cover the data range +- 8 obs_sigma [" << need_lo << ", " << need_hi
           << "]";
        throw InvalidArgument(os.str());
      }
    }
  }
  return integrate_box(
      [&](std::span<const double> mu) { return std::exp(gmm_log_joint(model, mu)); }, box);
}

double gmm_single_cluster_evidence(const GmmModel& model) {
  model.validate();
  if (model.clusters != 1) {
    throw InvalidArgument("closed-form evidence needs exactly one cluster");
  }
  // Covariance s2 I + t2 11^T: determinant s2^{n-1} (s2 + n t2), inverse via
  // Sherman-Morrison.
  const double s2 = model.obs_sigma * model.obs_sigma;
  const double t2 = model.prior_sigma * model.prior_sigma;
  const auto n = static_cast<double>(model.observations.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : model.observations) {
    sum += x;
    sum_sq += x * x;
  }
  const double quad = (sum_sq - t2 * sum * sum / (s2 + n * t2)) / s2;
  const double log_det = (n - 1.0) * std::log(s2) + std::log(s2 + n * t2);
  return std::exp(-0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * log_det - 0.5 * quad);
}

}  // namespace opaa::oracle
