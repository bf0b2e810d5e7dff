#include "opaa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "opaa/detail/checked.hpp"
#include "opaa/errors.hpp"
#include "opaa/hermite.hpp"
#include "opaa/tridiagonal.hpp"

namespace opaa {

namespace {

void check_order(int order) {
  if (order < 1 || order > kMaxQuadratureOrder) {
    throw InvalidArgument("Gauss-Hermite order must be in [1, " +
                          std::to_string(kMaxQuadratureOrder) + "], got " +
                          std::to_string(order));
  }
}

TridiagonalEigen jacobi_eigen(int order) {
  std::vector<double> diag(static_cast<std::size_t>(order), 0.0);
  std::vector<double> off;
  off.reserve(static_cast<std::size_t>(order - 1));
  for (int k = 1; k < order; ++k) off.push_back(std::sqrt(0.5 * k));
  return symmetric_tridiagonal_eigen(std::move(diag), std::move(off));
}

// h_{n-1}(x) and h_n(x) in one pass.
std::pair<double, double> hermite_pair(int n, double x) {
  double prev = 0.0;
  double cur = kHermiteH0;
  for (int k = 0; k < n; ++k) {
    const double kp1 = k + 1.0;
    const double next = x * std::sqrt(2.0 / kp1) * cur - std::sqrt(k / kp1) * prev;
    prev = cur;
    cur = next;
  }
  return {prev, cur};
}

double closed_form_weight(int order, double node) {
  const double h = hermite_pair(order, node).first;
  return 1.0 / (order * h * h);
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
  check_order(order);
  const auto n = static_cast<std::size_t>(order);
  std::vector<double> nodes = jacobi_eigen(order).values;

  // Newton on h_order, using h_n' = sqrt(2n) h_{n-1}.
  for (double& x : nodes) {
    for (int it = 0; it < 2; ++it) {
      const auto [hm1, h] = hermite_pair(order, x);
      if (hm1 == 0.0) break;
      x -= h / (std::sqrt(2.0 * order) * hm1);
    }
  }

  for (std::size_t i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    nodes[i] = -a;
    nodes[n - 1 - i] = a;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;

  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = closed_form_weight(order, nodes[i]);
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double w = 0.5 * (weights[i] + weights[n - 1 - i]);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }

  QuadratureRule rule;
  rule.order = order;
  rule.scaled_nodes.reserve(n);
  rule.scaled_weights.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.scaled_nodes.push_back(std::numbers::sqrt2 * nodes[i]);
    rule.scaled_weights.push_back(std::numbers::sqrt2 * weights[i]);
  }
  rule.nodes = std::move(nodes);
  rule.weights = std::move(weights);
  return rule;
}

std::vector<double> gauss_hermite_eigen_weights(int order) {
  check_order(order);
  const TridiagonalEigen eig = jacobi_eigen(order);
  const double mass = std::sqrt(std::numbers::pi);
  std::vector<double> w;
  w.reserve(eig.first_row.size());
  for (double v : eig.first_row) w.push_back(mass * v * v);
  return w;
}

double integrate_1d(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.scaled_nodes.size(); ++i) {
    const double x = rule.scaled_nodes[i];
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      throw NumericalDomainError("integrate_1d: integrand is not finite at node " +
                                     std::to_string(i + 1) + " (x = " + std::to_string(x) + ")",
                                 {x});
    }
    sum += rule.scaled_weights[i] * fx;
  }
  return sum;
}

// ---------------------------------------------------------------------------

TensorGrid::TensorGrid(QuadratureRule rule, int dim, GridWeighting weighting)
    : rule_(std::move(rule)), dim_(dim), weighting_(weighting) {
  if (dim < 1) throw InvalidArgument("TensorGrid: dimension must be >= 1");
  if (rule_.order < 1 || rule_.nodes.size() != static_cast<std::size_t>(rule_.order)) {
    throw InvalidArgument("TensorGrid: malformed quadrature rule");
  }
}

std::uint64_t TensorGrid::size() const {
  auto n = detail::checked_pow(static_cast<std::uint64_t>(rule_.order), dim_);
  if (!n) {
    throw CapacityError("TensorGrid: " + std::to_string(rule_.order) + "^" +
                        std::to_string(dim_) + " grid points overflow a 64-bit index");
  }
  return *n;
}

void TensorGrid::check(const GridIndex& j) const {
  if (j.entries.size() != static_cast<std::size_t>(dim_)) {
    throw InvalidArgument("grid index has " + std::to_string(j.entries.size()) +
                          " entries, grid dimension is " + std::to_string(dim_));
  }
  for (int e : j.entries) {
    if (e < 1 || e > rule_.order) {
      throw InvalidArgument("grid index entry " + std::to_string(e) + " outside [1, " +
                            std::to_string(rule_.order) + "]");
    }
  }
}

std::vector<double> TensorGrid::node(const GridIndex& j) const {
  check(j);
  const auto nodes = axis_nodes();
  std::vector<double> out;
  out.reserve(j.entries.size());
  for (int e : j.entries) out.push_back(nodes[static_cast<std::size_t>(e - 1)]);
  return out;
}

double TensorGrid::weight(const GridIndex& j) const {
  check(j);
  const auto weights = axis_weights();
  // Multiplied in sorted order so that permuted indices give bitwise equal
  // weights.
  std::vector<int> sorted = j.entries;
  std::sort(sorted.begin(), sorted.end());
  double w = 1.0;
  for (int e : sorted) w *= weights[static_cast<std::size_t>(e - 1)];
  return w;
}

GridIndex TensorGrid::index_at(std::uint64_t linear) const {
  if (linear >= size()) throw InvalidArgument("linear grid index out of range");
  GridIndex j;
  j.entries.resize(static_cast<std::size_t>(dim_));
  const auto gamma = static_cast<std::uint64_t>(rule_.order);
  for (int k = dim_ - 1; k >= 0; --k) {
    j.entries[k] = static_cast<int>(linear % gamma) + 1;
    linear /= gamma;
  }
  return j;
}

std::uint64_t TensorGrid::linear_index(const GridIndex& j) const {
  check(j);
  std::uint64_t lin = 0;
  for (int e : j.entries) lin = lin * static_cast<std::uint64_t>(rule_.order) + (e - 1);
  return lin;
}

double TensorGrid::total_weight() const {
  const auto weights = axis_weights();
  detail::CompensatedSum sum;
  for_each(0, size(), [&](std::uint64_t, std::span<const int> idx, std::span<const double>) {
    double w = 1.0;
    for (int i : idx) w *= weights[static_cast<std::size_t>(i)];
    sum.add(w);
  });
  return sum.value();
}

// ---------------------------------------------------------------------------

WeightMultisetStats weight_multiset_stats(int order, int dim, bool with_classes) {
  if (order < 1 || dim < 1) throw InvalidArgument("weight_multiset_stats: order and dim must be >= 1");
  WeightMultisetStats stats;
  auto distinct = detail::checked_binomial(static_cast<std::uint64_t>(order + dim - 1),
                                           static_cast<std::uint64_t>(dim));
  auto total = detail::checked_pow(static_cast<std::uint64_t>(order), dim);
  if (!distinct || !total) throw CapacityError("weight_multiset_stats: count overflows 64 bits");
  stats.distinct_count = *distinct;
  stats.total_count = *total;
  if (!with_classes) return stats;

  const QuadratureRule rule = gauss_hermite(order);
  stats.classes.reserve(static_cast<std::size_t>(stats.distinct_count));

  // Exponent vectors in descending lexicographic order: (dim, 0, ..., 0) first.
  std::vector<int> e(static_cast<std::size_t>(order), 0);
  auto emit = [&] {
    WeightClass c;
    c.exponents = e;
    c.weight = 1.0;
    std::uint64_t mult = 1;
    std::uint64_t remaining = static_cast<std::uint64_t>(dim);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      c.weight *= std::pow(rule.scaled_weights[i], e[i]);
      auto b = detail::checked_binomial(remaining, static_cast<std::uint64_t>(e[i]));
      auto m = b ? detail::checked_mul(mult, *b) : std::nullopt;
      if (!m) throw CapacityError("weight_multiset_stats: multiplicity overflows 64 bits");
      mult = *m;
      remaining -= static_cast<std::uint64_t>(e[i]);
    }
    c.multiplicity = mult;
    stats.classes.push_back(std::move(c));
  };
  auto recurse = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos + 1 == e.size()) {
      e[pos] = left;
      emit();
      e[pos] = 0;
      return;
    }
    for (int v = left; v >= 0; --v) {
      e[pos] = v;
      self(self, pos + 1, left - v);
    }
    e[pos] = 0;
  };
  recurse(recurse, 0, dim);
  return stats;
}

}  // namespace opaa
