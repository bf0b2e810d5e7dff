#include "opaa/coefficients.hpp"

#include <algorithm>
#include <string>

#include "opaa/errors.hpp"

namespace opaa {

CoefficientSet::CoefficientSet(int dim, int quad_order) : dim_(dim), quad_order_(quad_order) {
  if (dim < 1) throw InvalidArgument("CoefficientSet: dimension must be >= 1");
}

CoefficientSet CoefficientSet::from_entries(int dim, int quad_order,
                                            std::vector<Coefficient> entries) {
  CoefficientSet set(dim, quad_order);
  unsigned top = 0;
  for (const auto& c : entries) {
    if (c.tau.dim() != static_cast<std::size_t>(dim)) {
      throw InvalidArgument("CoefficientSet: multi-index dimension mismatch");
    }
    top = std::max(top, c.tau.degree());
  }
  std::vector<std::vector<Coefficient>> shells(entries.empty() ? 0 : top + 1);
  for (auto& c : entries) shells[c.tau.degree()].push_back(std::move(c));
  for (auto& s : shells) set.append_shell(std::move(s));
  return set;
}

void CoefficientSet::append_shell(std::vector<Coefficient> shell) {
  const auto degree = static_cast<unsigned>(shells_.size());
  double energy = 0.0;
  for (const auto& c : shell) {
    if (c.tau.dim() != static_cast<std::size_t>(dim_)) {
      throw InvalidArgument("CoefficientSet: multi-index dimension mismatch");
    }
    if (c.tau.degree() != degree) {
      throw InvalidArgument("CoefficientSet: expected degree " + std::to_string(degree) +
                            ", got " + std::to_string(c.tau.degree()));
    }
    energy += c.value * c.value;
  }
  shells_.push_back(std::move(shell));
  shell_energy_.push_back(energy);
  total_energy_ += energy;
}

std::size_t CoefficientSet::size() const noexcept {
  std::size_t n = 0;
  for (const auto& s : shells_) n += s.size();
  return n;
}

std::span<const Coefficient> CoefficientSet::shell(int degree) const {
  if (degree < 0 || degree > max_degree()) {
    throw InvalidArgument("CoefficientSet: no shell of degree " + std::to_string(degree));
  }
  return shells_[static_cast<std::size_t>(degree)];
}

std::optional<double> CoefficientSet::find(const MultiIndex& tau) const {
  if (tau.dim() != static_cast<std::size_t>(dim_) ||
      tau.degree() >= shells_.size()) {
    return std::nullopt;
  }
  for (const auto& c : shells_[tau.degree()]) {
    if (c.tau == tau) return c.value;
  }
  return std::nullopt;
}

double evidence(const CoefficientSet& coeffs) { return coeffs.total_energy(); }

}  // namespace opaa
