#ifndef OPAA_TARGET_HPP
#define OPAA_TARGET_HPP

#include <functional>
#include <span>
#include <vector>

namespace opaa {

/// An unnormalized density P on R^N, evaluated pointwise on the log scale.
/// log_density may return -infinity where P == 0. Implementations must be
/// deterministic and safe to call concurrently. exp(log_density) must be
/// integrable; that is the caller's responsibility.
class TargetDensity {
 public:
  virtual ~TargetDensity() = default;
  virtual int dim() const = 0;
  virtual double log_density(std::span<const double> theta) const = 0;
};

/// Adapts a callable to TargetDensity.
class FunctionTarget final : public TargetDensity {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  FunctionTarget(int dim, Fn log_density);

  int dim() const override { return dim_; }
  double log_density(std::span<const double> theta) const override { return fn_(theta); }

 private:
  int dim_;
  Fn fn_;
};

/// theta -> scale * theta + shift, coordinatewise. Pulling P back through the
/// map and multiplying by the Jacobian prod(scale) preserves the integral.
class AffineMap {
 public:
  /// Throws InvalidArgument if sizes differ, a scale is not strictly positive
  /// or anything is non-finite.
  AffineMap(std::vector<double> scale, std::vector<double> shift);

  static AffineMap identity(int dim);

  /// Maps N(mean_k, sd_k^2) onto the Hermite weight e^{-theta_k^2}:
  /// scale = sqrt(2) * sd, shift = mean.
  static AffineMap from_moments(std::span<const double> mean, std::span<const double> sd);

  int dim() const noexcept { return static_cast<int>(scale_.size()); }
  const std::vector<double>& scale() const noexcept { return scale_; }
  const std::vector<double>& shift() const noexcept { return shift_; }
  double log_jacobian() const noexcept { return log_jacobian_; }

  void forward(std::span<const double> theta, std::span<double> out) const;
  void inverse(std::span<const double> x, std::span<double> out) const;

 private:
  std::vector<double> scale_;
  std::vector<double> shift_;
  double log_jacobian_ = 0.0;
};

/// Q(theta) = P(scale * theta + shift) * prod(scale). Holds a reference to the
/// wrapped target, which must outlive it.
class PreconditionedTarget final : public TargetDensity {
 public:
  PreconditionedTarget(const TargetDensity& target, AffineMap map);

  int dim() const override { return target_.dim(); }
  double log_density(std::span<const double> theta) const override;

  const AffineMap& map() const noexcept { return map_; }

 private:
  const TargetDensity& target_;
  AffineMap map_;
};

}  // namespace opaa

#endif  // OPAA_TARGET_HPP
