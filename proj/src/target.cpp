#include "opaa/target.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "opaa/errors.hpp"

namespace opaa {

FunctionTarget::FunctionTarget(int dim, Fn log_density) : dim_(dim), fn_(std::move(log_density)) {
  if (dim < 1) throw InvalidArgument("FunctionTarget: dimension must be >= 1");
  if (!fn_) throw InvalidArgument("FunctionTarget: empty callable");
}

AffineMap::AffineMap(std::vector<double> scale, std::vector<double> shift)
    : scale_(std::move(scale)), shift_(std::move(shift)) {
  if (scale_.empty() || scale_.size() != shift_.size()) {
    throw InvalidArgument("AffineMap: scale and shift must be non-empty and the same length");
  }
  for (std::size_t k = 0; k < scale_.size(); ++k) {
    if (!(scale_[k] > 0.0) || !std::isfinite(scale_[k])) {
      throw InvalidArgument("AffineMap: scale[" + std::to_string(k) +
                            "] must be finite and > 0");
    }
    if (!std::isfinite(shift_[k])) {
      throw InvalidArgument("AffineMap: shift[" + std::to_string(k) + "] must be finite");
    }
    log_jacobian_ += std::log(scale_[k]);
  }
}

AffineMap AffineMap::identity(int dim) {
  if (dim < 1) throw InvalidArgument("AffineMap: dimension must be >= 1");
  const auto n = static_cast<std::size_t>(dim);
  return AffineMap(std::vector<double>(n, 1.0), std::vector<double>(n, 0.0));
}

AffineMap AffineMap::from_moments(std::span<const double> mean, std::span<const double> sd) {
  std::vector<double> scale;
  scale.reserve(sd.size());
  for (double s : sd) scale.push_back(std::numbers::sqrt2 * s);
  return AffineMap(std::move(scale), std::vector<double>(mean.begin(), mean.end()));
}

void AffineMap::forward(std::span<const double> theta, std::span<double> out) const {
  for (std::size_t k = 0; k < scale_.size(); ++k) out[k] = scale_[k] * theta[k] + shift_[k];
}

void AffineMap::inverse(std::span<const double> x, std::span<double> out) const {
  for (std::size_t k = 0; k < scale_.size(); ++k) out[k] = (x[k] - shift_[k]) / scale_[k];
}

PreconditionedTarget::PreconditionedTarget(const TargetDensity& target, AffineMap map)
    : target_(target), map_(std::move(map)) {
  if (map_.dim() != target_.dim()) {
    throw InvalidArgument("preconditioner dimension " + std::to_string(map_.dim()) +
                          " does not match target dimension " + std::to_string(target_.dim()));
  }
}

double PreconditionedTarget::log_density(std::span<const double> theta) const {
  // Small fixed buffer for the common case; falls back to the heap otherwise.
  constexpr std::size_t kInline = 16;
  double buf[kInline];
  std::vector<double> heap;
  std::span<double> x;
  if (theta.size() <= kInline) {
    x = std::span<double>(buf, theta.size());
  } else {
    heap.resize(theta.size());
    x = heap;
  }
  map_.forward(theta, x);
  return target_.log_density(x) + map_.log_jacobian();
}

}  // namespace opaa
