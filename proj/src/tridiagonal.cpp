#include "opaa/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "opaa/errors.hpp"

namespace opaa {

TridiagonalEigen symmetric_tridiagonal_eigen(std::vector<double> d, std::vector<double> off) {
  const std::size_t n = d.size();
  if (n == 0) throw InvalidArgument("symmetric_tridiagonal_eigen: empty matrix");
  if (off.size() + 1 != n) {
    throw InvalidArgument("symmetric_tridiagonal_eigen: off-diagonal must have n-1 entries");
  }
  std::vector<double> e(n, 0.0);
  std::copy(off.begin(), off.end(), e.begin());

  // First row of the accumulated rotation matrix, starting from the identity.
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;

  constexpr int kMaxSweeps = 60;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > kMaxSweeps) {
          throw CapacityError("symmetric_tridiagonal_eigen: QL iteration did not converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        std::size_t i = m;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  TridiagonalEigen out;
  out.values.reserve(n);
  out.first_row.reserve(n);
  for (std::size_t k : order) {
    out.values.push_back(d[k]);
    out.first_row.push_back(z[k]);
  }
  return out;
}

}  // namespace opaa
