#ifndef OPAA_COEFFICIENTS_HPP
#define OPAA_COEFFICIENTS_HPP

#include <optional>
#include <span>
#include <vector>

#include "opaa/multiindex.hpp"

namespace opaa {

struct Coefficient {
  MultiIndex tau;
  double value = 0.0;
};

/// Transform coefficients a_tau grouped into degree shells, with the running
/// sum of squares. total_energy() is the evidence estimate.
class CoefficientSet {
 public:
  CoefficientSet() = default;
  CoefficientSet(int dim, int quad_order);

  /// Groups arbitrary entries by degree, keeping their relative order. Used
  /// when reading coefficient files, where shells may be partial.
  static CoefficientSet from_entries(int dim, int quad_order, std::vector<Coefficient> entries);

  /// Appends the shell of degree max_degree() + 1. Every entry must have that
  /// degree and the set's dimension.
  void append_shell(std::vector<Coefficient> shell);

  int dim() const noexcept { return dim_; }
  int quad_order() const noexcept { return quad_order_; }

  /// Highest stored degree, or -1 when empty.
  int max_degree() const noexcept { return static_cast<int>(shells_.size()) - 1; }
  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }

  std::span<const Coefficient> shell(int degree) const;
  std::span<const double> shell_energy() const noexcept { return shell_energy_; }
  double total_energy() const noexcept { return total_energy_; }

  std::optional<double> find(const MultiIndex& tau) const;

  /// Visits every coefficient in shell order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& s : shells_)
      for (const auto& c : s) fn(c);
  }

 private:
  int dim_ = 0;
  int quad_order_ = 0;
  std::vector<std::vector<Coefficient>> shells_;
  std::vector<double> shell_energy_;
  double total_energy_ = 0.0;
};

/// Sum of a_tau^2 over the set.
double evidence(const CoefficientSet& coeffs);

}  // namespace opaa

#endif  // OPAA_COEFFICIENTS_HPP
