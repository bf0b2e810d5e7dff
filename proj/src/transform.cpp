#include "opaa/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "opaa/detail/parallel.hpp"
#include "opaa/errors.hpp"

namespace opaa {

namespace {

std::string format_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
  os << ')';
  return os.str();
}

void check_compatible(const TargetDensity& target, const TensorGrid& grid) {
  if (target.dim() != grid.dim()) {
    throw InvalidArgument("target dimension " + std::to_string(target.dim()) +
                          " does not match grid dimension " + std::to_string(grid.dim()));
  }
}

void check_table(const TensorGrid& grid, const HermiteTable& table, unsigned needed_degree) {
  const auto nodes = grid.axis_nodes();
  const auto pts = table.points();
  if (!std::equal(nodes.begin(), nodes.end(), pts.begin(), pts.end())) {
    throw InvalidArgument("Hermite table was not built on the grid's 1-D nodes");
  }
  if (table.max_degree() < needed_degree) {
    throw InvalidArgument("Hermite table covers degree " + std::to_string(table.max_degree()) +
                          ", need " + std::to_string(needed_degree));
  }
}

// Chunk length for streaming reductions. Depends only on the grid size, never
// on the worker count.
std::uint64_t chunk_length(std::uint64_t n) {
  constexpr std::uint64_t kMinChunk = 4096;
  constexpr std::uint64_t kMaxChunks = 4096;
  return std::max(kMinChunk, (n + kMaxChunks - 1) / kMaxChunks);
}

}  // namespace

double root_sample(const TargetDensity& target, std::span<const double> x,
                   GridWeighting weighting) {
  const double lp = target.log_density(x);
  if (std::isnan(lp) || lp == std::numeric_limits<double>::infinity()) {
    throw NumericalDomainError("log density is " + std::to_string(lp) + " at node " +
                                   format_point(x),
                               std::vector<double>(x.begin(), x.end()));
  }
  if (lp == -std::numeric_limits<double>::infinity()) return 0.0;
  double e = 0.5 * lp;
  if (weighting == GridWeighting::kHermite) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    e += 0.5 * r2;
  }
  const double g = std::exp(e);
  if (!std::isfinite(g)) {
    throw NumericalDomainError("sqrt of the density overflows at node " + format_point(x),
                               std::vector<double>(x.begin(), x.end()));
  }
  return g;
}

std::vector<double> sample_root_density(const TargetDensity& target, const TensorGrid& grid,
                                        unsigned workers, std::uint64_t max_samples) {
  check_compatible(target, grid);
  const std::uint64_t n = grid.size();
  if (n > max_samples) {
    throw CapacityError("grid has " + std::to_string(n) + " nodes, above the storage cap of " +
                        std::to_string(max_samples) + "; use the streaming path");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  const std::uint64_t chunk = chunk_length(n);
  const std::uint64_t chunks = (n + chunk - 1) / chunk;
  const GridWeighting weighting = grid.weighting();
  detail::parallel_for(static_cast<std::size_t>(chunks), workers, [&](std::size_t c) {
    const std::uint64_t begin = c * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    grid.for_each(begin, end, [&](std::uint64_t lin, std::span<const int>, std::span<const double> x) {
      out[static_cast<std::size_t>(lin)] = root_sample(target, x, weighting);
    });
  });
  return out;
}

std::vector<double> coefficients_streaming(const TargetDensity& target, const TensorGrid& grid,
                                           const HermiteTable& table,
                                           std::span<const MultiIndex> taus, unsigned workers) {
  check_compatible(target, grid);
  unsigned needed = 0;
  for (const auto& t : taus) {
    if (t.dim() != static_cast<std::size_t>(grid.dim())) {
      throw InvalidArgument("multi-index dimension does not match the grid");
    }
    needed = std::max(needed, t.max_entry());
  }
  check_table(grid, table, needed);

  const std::uint64_t n = grid.size();
  const std::uint64_t chunk = chunk_length(n);
  const std::uint64_t chunks = (n + chunk - 1) / chunk;
  const std::size_t m = taus.size();
  const auto weights = grid.axis_weights();
  const GridWeighting weighting = grid.weighting();
  const int dim = grid.dim();

  std::vector<double> partial(static_cast<std::size_t>(chunks) * m, 0.0);
  detail::parallel_for(static_cast<std::size_t>(chunks), workers, [&](std::size_t c) {
    double* acc = partial.data() + c * m;
    const std::uint64_t begin = c * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    grid.for_each(begin, end, [&](std::uint64_t, std::span<const int> idx, std::span<const double> x) {
      const double g = root_sample(target, x, weighting);
      if (g == 0.0) return;
      double wg = g;
      for (int k = 0; k < dim; ++k) wg *= weights[static_cast<std::size_t>(idx[k])];
      for (std::size_t t = 0; t < m; ++t) {
        double phi = 1.0;
        for (int k = 0; k < dim; ++k) phi *= table(taus[t][k], static_cast<std::size_t>(idx[k]));
        acc[t] += wg * phi;
      }
    });
  });

  std::vector<double> out(m, 0.0);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    for (std::size_t t = 0; t < m; ++t) out[t] += partial[c * m + t];
  }
  return out;
}

double coefficient_naive(const TargetDensity& target, const TensorGrid& grid,
                         const HermiteTable& table, const MultiIndex& tau) {
  return coefficients_streaming(target, grid, table, std::span<const MultiIndex>(&tau, 1), 1)[0];
}

// ---------------------------------------------------------------------------

namespace {

// Depth-first axis-by-axis contraction. At level k the working slab holds the
// samples with axes 0..k-1 already contracted against B rows tau_0..tau_{k-1}.
class Contractor {
 public:
  Contractor(std::span<const double> samples, std::vector<double> b, int gamma, int dim,
             unsigned min_degree, unsigned max_degree)
      : samples_(samples),
        b_(std::move(b)),
        gamma_(static_cast<std::size_t>(gamma)),
        dim_(dim),
        min_degree_(min_degree),
        max_degree_(max_degree) {}

  // Emits every coefficient whose first entry is t0.
  void run_from(unsigned t0, std::vector<Coefficient>& out) const {
    std::vector<std::vector<double>> bufs(static_cast<std::size_t>(dim_));
    std::size_t len = samples_.size();
    for (int k = 1; k < dim_; ++k) {
      len /= gamma_;
      bufs[static_cast<std::size_t>(k)].resize(len);
    }
    std::vector<unsigned> tau(static_cast<std::size_t>(dim_), 0u);
    step(0, samples_.data(), samples_.size(), 0u, t0, tau, bufs, out);
  }

  unsigned first_lo() const { return dim_ == 1 ? min_degree_ : 0u; }
  unsigned first_hi() const { return max_degree_; }

 private:
  const double* row(unsigned d) const { return b_.data() + d * gamma_; }

  void step(int level, const double* slab, std::size_t len, unsigned sum, unsigned t,
            std::vector<unsigned>& tau, std::vector<std::vector<double>>& bufs,
            std::vector<Coefficient>& out) const {
    tau[static_cast<std::size_t>(level)] = t;
    const double* bt = row(t);
    if (level == dim_ - 1) {
      double a = 0.0;
      for (std::size_t i = 0; i < gamma_; ++i) a += bt[i] * slab[i];
      out.push_back({MultiIndex(tau), a});
      return;
    }
    const std::size_t stride = len / gamma_;
    double* next = bufs[static_cast<std::size_t>(level + 1)].data();
    std::fill(next, next + stride, 0.0);
    for (std::size_t i = 0; i < gamma_; ++i) {
      const double c = bt[i];
      const double* src = slab + i * stride;
      for (std::size_t r = 0; r < stride; ++r) next[r] += c * src[r];
    }
    const unsigned s = sum + t;
    const bool last = level + 1 == dim_ - 1;
    const unsigned lo = last && min_degree_ > s ? min_degree_ - s : 0u;
    for (unsigned u = lo; u + s <= max_degree_; ++u) {
      step(level + 1, next, stride, s, u, tau, bufs, out);
    }
  }

  std::span<const double> samples_;
  std::vector<double> b_;
  std::size_t gamma_;
  int dim_;
  unsigned min_degree_;
  unsigned max_degree_;
};

bool shell_order(const Coefficient& a, const Coefficient& b) {
  if (a.tau.degree() != b.tau.degree()) return a.tau.degree() < b.tau.degree();
  return b.tau < a.tau;
}

}  // namespace

std::vector<Coefficient> contract_samples(std::span<const double> samples, const TensorGrid& grid,
                                          const HermiteTable& table, unsigned min_degree,
                                          unsigned max_degree, unsigned workers) {
  if (samples.size() != grid.size()) {
    throw InvalidArgument("sample count " + std::to_string(samples.size()) +
                          " does not match grid size " + std::to_string(grid.size()));
  }
  if (min_degree > max_degree) return {};
  check_table(grid, table, max_degree);

  const int gamma = grid.order();
  const auto weights = grid.axis_weights();
  std::vector<double> b(static_cast<std::size_t>(max_degree + 1) * gamma);
  for (unsigned d = 0; d <= max_degree; ++d) {
    const auto h = table.row(d);
    for (int i = 0; i < gamma; ++i) b[d * gamma + i] = weights[i] * h[i];
  }

  const Contractor contractor(samples, std::move(b), gamma, grid.dim(), min_degree, max_degree);
  const unsigned lo = contractor.first_lo();
  const unsigned hi = contractor.first_hi();
  std::vector<std::vector<Coefficient>> parts(hi - lo + 1);
  detail::parallel_for(parts.size(), workers, [&](std::size_t i) {
    contractor.run_from(lo + static_cast<unsigned>(i), parts[i]);
  });

  std::vector<Coefficient> out;
  for (auto& p : parts) {
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  std::sort(out.begin(), out.end(), shell_order);
  return out;
}

CoefficientSet coefficients_contracted(const TargetDensity& target, const TensorGrid& grid,
                                       const HermiteTable& table, unsigned max_degree,
                                       unsigned workers, std::uint64_t max_samples) {
  const std::vector<double> samples = sample_root_density(target, grid, workers, max_samples);
  std::vector<Coefficient> all = contract_samples(samples, grid, table, 0, max_degree, workers);
  return CoefficientSet::from_entries(grid.dim(), grid.order(), std::move(all));
}

// ---------------------------------------------------------------------------

OpaaResult run_opaa(const TargetDensity& target, const OpaaOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidArgument("run_opaa: tol must be > 0");
  if (options.max_degree < 0) throw InvalidArgument("run_opaa: max_degree must be >= 0");

  std::optional<PreconditionedTarget> pre;
  if (options.precondition) pre.emplace(target, *options.precondition);
  const TargetDensity& effective = pre ? static_cast<const TargetDensity&>(*pre) : target;

  const int dim = effective.dim();
  const TensorGrid grid(gauss_hermite(options.quad_order), dim, options.weighting);
  const auto nodes = grid.axis_nodes();
  HermiteTable table(0, std::vector<double>(nodes.begin(), nodes.end()));
  const unsigned workers = std::max(1u, options.workers);

  const std::uint64_t n = grid.size();
  CoefficientPath path = options.path;
  if (path == CoefficientPath::kAuto) {
    path = n <= options.max_stored_samples ? CoefficientPath::kContracted
                                           : CoefficientPath::kStreaming;
  }
  std::vector<double> samples;
  if (path == CoefficientPath::kContracted) {
    samples = sample_root_density(effective, grid, workers, options.max_stored_samples);
  }

  OpaaResult result;
  result.path_used = path;
  result.coefficients = CoefficientSet(dim, options.quad_order);
  CoefficientSet& set = result.coefficients;
  result.stop = StopReason::kMaxDegree;

  for (int d = 0; d <= options.max_degree; ++d) {
    const auto deg = static_cast<unsigned>(d);
    table.extend_to(deg);
    std::vector<Coefficient> shell;
    if (path == CoefficientPath::kContracted) {
      shell = contract_samples(samples, grid, table, deg, deg, workers);
    } else {
      const std::vector<MultiIndex> taus = enumerate_shell(dim, d);
      const std::vector<double> values = coefficients_streaming(effective, grid, table, taus, workers);
      shell.reserve(taus.size());
      for (std::size_t i = 0; i < taus.size(); ++i) shell.push_back({taus[i], values[i]});
    }
    set.append_shell(std::move(shell));
    result.max_degree_reached = d;

    const double total = set.total_energy();
    const auto energy = set.shell_energy();
    if (d >= 1 && total > 0.0 && energy[deg] <= options.tol * total &&
        energy[deg - 1] <= options.tol * total) {
      result.stop = StopReason::kConverged;
      break;
    }
  }

  if (!(set.total_energy() > std::numeric_limits<double>::min())) {
    throw DegenerateTargetError(
        "total coefficient energy is zero: the density vanishes at every quadrature node. "
        "Precondition the target (scale/shift) so its mass lies under the nodes.");
  }
  result.evidence = set.total_energy();
  return result;
}

}  // namespace opaa
