#include "opaa/multiindex.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "opaa/detail/checked.hpp"
#include "opaa/errors.hpp"

namespace opaa {

MultiIndex::MultiIndex(std::vector<unsigned> entries)
    : entries_(std::move(entries)),
      degree_(std::accumulate(entries_.begin(), entries_.end(), 0u)) {}

unsigned MultiIndex::max_entry() const noexcept {
  return entries_.empty() ? 0u : *std::max_element(entries_.begin(), entries_.end());
}

std::uint64_t shell_count(int dim, int degree) {
  if (dim < 1 || degree < 0) throw InvalidArgument("shell_count: need dim >= 1 and degree >= 0");
  auto n = detail::checked_binomial(static_cast<std::uint64_t>(degree + dim - 1),
                                    static_cast<std::uint64_t>(dim - 1));
  if (!n) {
    throw CapacityError("shell_count: C(" + std::to_string(degree + dim - 1) + ", " +
                        std::to_string(dim - 1) + ") overflows 64 bits");
  }
  return *n;
}

std::vector<MultiIndex> enumerate_shell(int dim, int degree) {
  const std::uint64_t count = shell_count(dim, degree);
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<unsigned> cur(static_cast<std::size_t>(dim), 0u);
  auto recurse = [&](auto&& self, std::size_t pos, unsigned left) -> void {
    if (pos + 1 == cur.size()) {
      cur[pos] = left;
      out.emplace_back(cur);
      return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  recurse(recurse, 0, static_cast<unsigned>(degree));
  return out;
}

}  // namespace opaa
