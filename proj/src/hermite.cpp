#include "opaa/hermite.hpp"

#include <cmath>
#include <string>

#include "opaa/errors.hpp"

namespace opaa {

namespace {

// One step of h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}.
inline double recur(unsigned k, double x, double cur, double prev) {
  const double kp1 = static_cast<double>(k) + 1.0;
  return x * std::sqrt(2.0 / kp1) * cur - std::sqrt(static_cast<double>(k) / kp1) * prev;
}

// Rescaling threshold for the psi recurrence. Values are kept below 2^500 and
// the removed powers of two are carried in an exponent.
constexpr double kBig = 0x1p500;
constexpr int kBigExp = 500;

}  // namespace

double hermite_h(unsigned n, double x) {
  double prev = 0.0;
  double cur = kHermiteH0;
  for (unsigned k = 0; k < n; ++k) {
    const double next = recur(k, x, cur, prev);
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_h_all(double x, std::span<double> out) {
  double prev = 0.0;
  double cur = kHermiteH0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = cur;
    const double next = recur(static_cast<unsigned>(k), x, cur, prev);
    prev = cur;
    cur = next;
  }
}

double hermite_psi(unsigned n, double x) {
  // psi_n(x) = h_n(x) * exp(-x^2/2); the polynomial part is kept in
  // [cur * 2^scale_exp] form.
  double prev = 0.0;
  double cur = kHermiteH0;
  int scale_exp = 0;
  for (unsigned k = 0; k < n; ++k) {
    const double next = recur(k, x, cur, prev);
    prev = cur;
    cur = next;
    if (std::abs(cur) > kBig) {
      cur = std::ldexp(cur, -kBigExp);
      prev = std::ldexp(prev, -kBigExp);
      scale_exp += kBigExp;
    }
  }
  if (cur == 0.0) return 0.0;
  const double log_mag = std::log(std::abs(cur)) + scale_exp * std::log(2.0) - 0.5 * x * x;
  return std::copysign(std::exp(log_mag), cur);
}

void hermite_psi_all(double x, std::span<double> out) {
  const double half_x2 = 0.5 * x * x;
  double prev = 0.0;
  double cur = kHermiteH0;
  int scale_exp = 0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (cur == 0.0) {
      out[k] = 0.0;
    } else {
      const double log_mag = std::log(std::abs(cur)) + scale_exp * std::log(2.0) - half_x2;
      out[k] = std::copysign(std::exp(log_mag), cur);
    }
    const double next = recur(static_cast<unsigned>(k), x, cur, prev);
    prev = cur;
    cur = next;
    if (std::abs(cur) > kBig) {
      cur = std::ldexp(cur, -kBigExp);
      prev = std::ldexp(prev, -kBigExp);
      scale_exp += kBigExp;
    }
  }
}

HermiteTable::HermiteTable(unsigned max_degree, std::vector<double> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw InvalidArgument("HermiteTable: points must be non-empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) {
      throw InvalidArgument("HermiteTable: point " + std::to_string(i) + " is not finite");
    }
  }
  const std::size_t m = points_.size();
  values_.assign(m, kHermiteH0);
  extend_to(max_degree);
}

std::span<const double> HermiteTable::row(unsigned degree) const {
  if (degree > max_degree_) {
    throw InvalidArgument("HermiteTable: degree " + std::to_string(degree) +
                          " exceeds table degree " + std::to_string(max_degree_));
  }
  return {values_.data() + degree * points_.size(), points_.size()};
}

void HermiteTable::extend_to(unsigned new_max_degree) {
  const std::size_t m = points_.size();
  if (new_max_degree <= max_degree_) return;
  if (max_degree_ == 0) {
    values_.resize(2 * m);
    for (std::size_t i = 0; i < m; ++i) values_[m + i] = recur(0, points_[i], kHermiteH0, 0.0);
    max_degree_ = 1;
  }
  values_.resize((new_max_degree + 1) * m);
  for (unsigned d = max_degree_ + 1; d <= new_max_degree; ++d) {
    const double* prev = values_.data() + (d - 2) * m;
    const double* cur = values_.data() + (d - 1) * m;
    double* next = values_.data() + d * m;
    for (std::size_t i = 0; i < m; ++i) next[i] = recur(d - 1, points_[i], cur[i], prev[i]);
  }
  max_degree_ = new_max_degree;
}

HermiteTable build_hermite_table(unsigned max_degree, std::vector<double> points) {
  return HermiteTable(max_degree, std::move(points));
}

}  // namespace opaa
