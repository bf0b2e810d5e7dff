#ifndef OPAA_QUADRATURE_HPP
#define OPAA_QUADRATURE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace opaa {

inline constexpr int kMaxQuadratureOrder = 256;

/// Gauss-Hermite rule for the weight e^{-x^2}, together with its sqrt(2)
/// rescaling for the weight e^{-x^2/2}.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;           // roots of H_order, ascending
  std::vector<double> weights;         // sum = sqrt(pi)
  std::vector<double> scaled_nodes;    // sqrt(2) * nodes
  std::vector<double> scaled_weights;  // sqrt(2) * weights, sum = sqrt(2 pi)
};

/// Nodes from the eigenvalues of the Jacobi matrix (zero diagonal,
/// off-diagonal sqrt(k/2)), polished by Newton on h_order. Weights from
/// w_i = 1 / (order * h_{order-1}(r_i)^2). The rule is symmetrized about 0.
///
/// Throws InvalidArgument unless 1 <= order <= kMaxQuadratureOrder.
QuadratureRule gauss_hermite(int order);

/// Golub-Welsch weights sqrt(pi) * v_{0,i}^2 from the same Jacobi matrix.
/// Independent of the closed-form weights used by gauss_hermite; kept for
/// cross-checking.
std::vector<double> gauss_hermite_eigen_weights(int order);

/// sum_i scaled_weights[i] * f(scaled_nodes[i]), approximating
/// the integral of f(x) e^{-x^2/2}. Throws NumericalDomainError if f is not
/// finite at a node.
double integrate_1d(const std::function<double(double)>& f, const QuadratureRule& rule);

/// Which measure the tensor grid integrates against.
enum class GridWeighting {
  kHalfGaussian,  // prod e^{-x_k^2/2}: sqrt(2)-scaled nodes and weights
  kHermite,       // prod e^{-x_k^2}: raw Gauss-Hermite nodes and weights
};

/// 1-based grid index (j_1, ..., j_N), each entry in [1, order].
struct GridIndex {
  std::vector<int> entries;
};

/// The full tensor product of a 1-D rule in N dimensions. Nodes are never
/// materialized; linear indices run in odometer order (last coordinate
/// fastest).
class TensorGrid {
 public:
  TensorGrid(QuadratureRule rule, int dim,
             GridWeighting weighting = GridWeighting::kHalfGaussian);

  const QuadratureRule& rule() const noexcept { return rule_; }
  int dim() const noexcept { return dim_; }
  int order() const noexcept { return rule_.order; }
  GridWeighting weighting() const noexcept { return weighting_; }

  /// Gamma^N. Throws CapacityError if it does not fit in 64 bits.
  std::uint64_t size() const;

  /// 1-D nodes and weights for the grid's measure.
  std::span<const double> axis_nodes() const noexcept {
    return weighting_ == GridWeighting::kHermite ? rule_.nodes : rule_.scaled_nodes;
  }
  std::span<const double> axis_weights() const noexcept {
    return weighting_ == GridWeighting::kHermite ? rule_.weights : rule_.scaled_weights;
  }

  std::vector<double> node(const GridIndex& j) const;
  double weight(const GridIndex& j) const;

  GridIndex index_at(std::uint64_t linear) const;
  std::uint64_t linear_index(const GridIndex& j) const;

  /// Calls fn(linear, zero_based_index, point) for every linear index in
  /// [begin, end).
  template <class Fn>
  void for_each(std::uint64_t begin, std::uint64_t end, Fn&& fn) const;

  /// Sum of weights over the whole grid, accumulated lazily.
  double total_weight() const;

 private:
  void check(const GridIndex& j) const;

  QuadratureRule rule_;
  int dim_;
  GridWeighting weighting_;
};

struct WeightClass {
  std::vector<int> exponents;    // e_i = how many coordinates use node i
  double weight = 0.0;           // prod scaled_weights[i]^{e_i}
  std::uint64_t multiplicity = 0;  // N! / prod e_i!
};

/// Grid weights grouped by the multiset of 1-D nodes they use. Two grid
/// indices that are permutations of each other share a class.
struct WeightMultisetStats {
  std::uint64_t distinct_count = 0;  // C(order + dim - 1, dim)
  std::uint64_t total_count = 0;     // order^dim
  std::vector<WeightClass> classes;
};

/// Counts are combinatorial; the grid itself is never enumerated.
/// Throws CapacityError if a count does not fit in 64 bits, InvalidArgument
/// for order or dim below 1.
WeightMultisetStats weight_multiset_stats(int order, int dim, bool with_classes = true);

// ---------------------------------------------------------------------------

template <class Fn>
void TensorGrid::for_each(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
  if (begin >= end) return;
  const auto nodes = axis_nodes();
  std::vector<int> idx(static_cast<std::size_t>(dim_));
  std::vector<double> point(static_cast<std::size_t>(dim_));
  std::uint64_t rest = begin;
  const auto gamma = static_cast<std::uint64_t>(rule_.order);
  for (int k = dim_ - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(rest % gamma);
    rest /= gamma;
    point[k] = nodes[idx[k]];
  }
  for (std::uint64_t lin = begin; lin < end; ++lin) {
    fn(lin, std::span<const int>(idx), std::span<const double>(point));
    for (int k = dim_ - 1; k >= 0; --k) {
      if (++idx[k] < rule_.order) {
        point[k] = nodes[idx[k]];
        break;
      }
      idx[k] = 0;
      point[k] = nodes[0];
    }
  }
}

}  // namespace opaa

#endif  // OPAA_QUADRATURE_HPP
