#ifndef OPAA_TRIDIAGONAL_HPP
#define OPAA_TRIDIAGONAL_HPP

#include <vector>

namespace opaa {

struct TridiagonalEigen {
  std::vector<double> values;       // ascending
  std::vector<double> first_row;    // first component of each unit eigenvector
};

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit-shift QL,
/// plus the first component of each normalized eigenvector (enough for
/// Golub-Welsch weights). off_diagonal has diagonal.size() - 1 entries.
TridiagonalEigen symmetric_tridiagonal_eigen(std::vector<double> diagonal,
                                             std::vector<double> off_diagonal);

}  // namespace opaa

#endif  // OPAA_TRIDIAGONAL_HPP
