#ifndef OPAA_MULTIINDEX_HPP
#define OPAA_MULTIINDEX_HPP

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace opaa {

/// tau = (i_1, ..., i_N) selecting the basis function h_{i_1}(x_1)...h_{i_N}(x_N).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> entries);
  MultiIndex(std::initializer_list<unsigned> entries)
      : MultiIndex(std::vector<unsigned>(entries)) {}

  std::span<const unsigned> entries() const noexcept { return entries_; }
  unsigned operator[](std::size_t k) const noexcept { return entries_[k]; }
  std::size_t dim() const noexcept { return entries_.size(); }
  unsigned degree() const noexcept { return degree_; }
  unsigned max_entry() const noexcept;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ == b.entries_;
  }
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::vector<unsigned> entries_;
  unsigned degree_ = 0;
};

/// All tau of dimension dim with |tau| == degree, in reverse-lexicographic
/// order: the first entry descends fastest-to-slowest, e.g. for dim 2,
/// degree 2: (2,0), (1,1), (0,2).
std::vector<MultiIndex> enumerate_shell(int dim, int degree);

/// C(degree + dim - 1, dim - 1). Throws CapacityError on 64-bit overflow.
std::uint64_t shell_count(int dim, int degree);

}  // namespace opaa

#endif  // OPAA_MULTIINDEX_HPP
