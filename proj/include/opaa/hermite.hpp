#ifndef OPAA_HERMITE_HPP
#define OPAA_HERMITE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace opaa {

/// pi^{-1/4}, the value of h_0 everywhere.
inline constexpr double kHermiteH0 = 0.75112554446494248286;

/// Normalized physicists' Hermite polynomial h_n(x) = H_n(x) / ||H_n||, with
/// the norm taken against e^{-x^2}. Evaluated by the normalized three-term
/// recurrence, so no factorials are formed.
double hermite_h(unsigned n, double x);

/// Writes h_0(x) .. h_{out.size()-1}(x).
void hermite_h_all(double x, std::span<double> out);

/// Hermite function psi_n(x) = h_n(x) e^{-x^2/2}.
///
/// The recurrence runs on a rescaled seed and the Gaussian factor is applied
/// once at the end in log space, so large |x| neither overflows h_n nor
/// underflows the exponential prematurely.
double hermite_psi(unsigned n, double x);

/// Writes psi_0(x) .. psi_{out.size()-1}(x).
void hermite_psi_all(double x, std::span<double> out);

/// Values h_d(points[i]) for 0 <= d <= max_degree, stored row-major by degree.
class HermiteTable {
 public:
  /// Throws InvalidArgument if points is empty or has a non-finite entry.
  HermiteTable(unsigned max_degree, std::vector<double> points);

  unsigned max_degree() const noexcept { return max_degree_; }
  std::size_t num_points() const noexcept { return points_.size(); }
  std::span<const double> points() const noexcept { return points_; }

  std::span<const double> row(unsigned degree) const;

  double operator()(unsigned degree, std::size_t i) const noexcept {
    return values_[degree * points_.size() + i];
  }

  /// Appends rows up to new_max_degree. Each new row is derived from the two
  /// rows before it. No-op if the table already covers that degree.
  void extend_to(unsigned new_max_degree);

 private:
  unsigned max_degree_ = 0;
  std::vector<double> points_;
  std::vector<double> values_;
};

HermiteTable build_hermite_table(unsigned max_degree, std::vector<double> points);

}  // namespace opaa

#endif  // OPAA_HERMITE_HPP
