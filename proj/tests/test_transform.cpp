#include "opaa/transform.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "opaa/errors.hpp"
#include "opaa/models.hpp"

namespace opaa {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HermiteTable table_for(const TensorGrid& grid, unsigned degree) {
  const auto nodes = grid.axis_nodes();
  return HermiteTable(degree, std::vector<double>(nodes.begin(), nodes.end()));
}

PlantedDensity planted_1d() {
  return PlantedDensity(1, {{MultiIndex{0}, 1.0}, {MultiIndex{2}, 0.1}});
}

PlantedDensity planted_2d() {
  return PlantedDensity(2, {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 1}, 0.2}});
}

// Three-cluster posterior pulled back onto the Hermite weight, offset so the
// values are O(1).
struct GmmFixture {
  GmmModel model{3, 10.0, 1.0, {-2.1, -1.6, 0.4, 0.9, 3.2, 3.9}};
  GmmTarget gmm{model};
  PreconditionedTarget pre{gmm, AffineMap({2.5, 2.5, 2.5}, {0.5, 0.5, 0.5})};
  double offset = pre.log_density(std::vector<double>{-0.8, 0.0, 1.0});
  FunctionTarget target{3, [this](std::span<const double> x) { return pre.log_density(x) - offset; }};
};

TEST(RootSample, HandlesLogDensityEdgeCases) {
  const FunctionTarget neg_inf(1, [](std::span<const double>) { return -kInf; });
  const FunctionTarget pos_inf(1, [](std::span<const double>) { return kInf; });
  const FunctionTarget nan(1, [](std::span<const double>) { return std::nan(""); });
  const FunctionTarget huge(1, [](std::span<const double>) { return 2000.0; });
  const std::vector<double> x{0.25};
  EXPECT_EQ(root_sample(neg_inf, x, GridWeighting::kHermite), 0.0);
  EXPECT_THROW(root_sample(pos_inf, x, GridWeighting::kHermite), NumericalDomainError);
  EXPECT_THROW(root_sample(huge, x, GridWeighting::kHalfGaussian), NumericalDomainError);
  try {
    (void)root_sample(nan, x, GridWeighting::kHalfGaussian);
    FAIL();
  } catch (const NumericalDomainError& e) {
    EXPECT_EQ(e.point(), x);
  }
}

TEST(RootSample, WeightingFactor) {
  const GaussianIdentity g(2);
  const std::vector<double> x{0.5, -1.0};
  const double half = root_sample(g, x, GridWeighting::kHalfGaussian);
  const double herm = root_sample(g, x, GridWeighting::kHermite);
  EXPECT_NEAR(half, std::exp(-0.5 * 1.25) / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(herm, 1.0 / std::sqrt(std::numbers::pi), 1e-15);
}

TEST(CoefficientNaive, GaussianIdentityIsExactForAnyOrder) {
  const GaussianIdentity target(1);
  for (int order = 1; order <= 12; ++order) {
    const TensorGrid grid(gauss_hermite(order), 1, GridWeighting::kHermite);
    const HermiteTable table = table_for(grid, 3);
    EXPECT_NEAR(coefficient_naive(target, grid, table, MultiIndex{0}), 1.0, 1e-12) << order;
    if (order >= 2) {
      EXPECT_NEAR(coefficient_naive(target, grid, table, MultiIndex{3}), 0.0, 1e-12) << order;
    }
  }
}

TEST(CoefficientNaive, HalfGaussianWeightingConvergesWithOrder) {
  // sqrt(P) * phi_0 is not a polynomial against e^{-x^2/2}: two nodes miss by
  // 1 - sqrt(2/e), and the error only vanishes as the order grows.
  const GaussianIdentity target(1);
  const auto a0 = [&](int order) {
    const TensorGrid grid(gauss_hermite(order), 1, GridWeighting::kHalfGaussian);
    return coefficient_naive(target, grid, table_for(grid, 0), MultiIndex{0});
  };
  EXPECT_NEAR(a0(2), std::sqrt(2.0 / std::exp(1.0)), 1e-14);
  EXPECT_GT(std::abs(a0(4) - 1.0), 1e-4);
  EXPECT_NEAR(a0(40), 1.0, 1e-12);
}

TEST(CoefficientNaive, PlantedOneDimensional) {
  const auto target = planted_1d();
  const TensorGrid grid(gauss_hermite(4), 1, GridWeighting::kHermite);
  const HermiteTable table = table_for(grid, 3);
  EXPECT_NEAR(coefficient_naive(target, grid, table, MultiIndex{0}), 1.0, 1e-10);
  EXPECT_NEAR(coefficient_naive(target, grid, table, MultiIndex{1}), 0.0, 1e-10);
  EXPECT_NEAR(coefficient_naive(target, grid, table, MultiIndex{2}), 0.1, 1e-10);
  EXPECT_NEAR(coefficient_naive(target, grid, table, MultiIndex{3}), 0.0, 1e-10);
}

TEST(CoefficientNaive, RejectsMismatchedInputs) {
  const auto target = planted_1d();
  const TensorGrid grid(gauss_hermite(4), 1, GridWeighting::kHermite);
  const HermiteTable small = table_for(grid, 1);
  EXPECT_THROW(coefficient_naive(target, grid, small, MultiIndex{2}), InvalidArgument);
  const HermiteTable wrong(3, {0.0, 1.0});
  EXPECT_THROW(coefficient_naive(target, grid, wrong, MultiIndex{1}), InvalidArgument);
  EXPECT_THROW(coefficient_naive(target, grid, small, MultiIndex{0, 0}), InvalidArgument);
  const TensorGrid grid2(gauss_hermite(4), 2, GridWeighting::kHermite);
  EXPECT_THROW(coefficient_naive(target, grid2, table_for(grid2, 1), MultiIndex{0, 0}),
               InvalidArgument);
}

TEST(Contracted, OneDimensionalMatchesNaive) {
  const GmmTarget target(GmmModel{1, 1.0, 1.0, {0.3, -0.2}});
  const TensorGrid grid(gauss_hermite(9), 1, GridWeighting::kHermite);
  const HermiteTable table = table_for(grid, 8);
  const CoefficientSet set = coefficients_contracted(target, grid, table, 8);
  ASSERT_EQ(set.size(), 9u);
  for (unsigned d = 0; d <= 8; ++d) {
    const double naive = coefficient_naive(target, grid, table, MultiIndex{d});
    EXPECT_NEAR(*set.find(MultiIndex{d}), naive, 1e-15 * std::max(1.0, std::abs(naive)));
  }
}

TEST(Contracted, PlantedTwoDimensional) {
  const auto target = planted_2d();
  // Order 3 keeps q positive at every node; from order 4 the corner nodes
  // see q < 0 and |q| is no longer a polynomial there.
  const TensorGrid grid(gauss_hermite(3), 2, GridWeighting::kHermite);
  ASSERT_GT(target.min_on_grid(grid), 0.0);
  const HermiteTable table = table_for(grid, 4);
  const CoefficientSet set = coefficients_contracted(target, grid, table, 4);
  EXPECT_EQ(set.size(), 15u);
  set.for_each([](const Coefficient& c) {
    double expected = 0.0;
    if (c.tau == MultiIndex{0, 0}) expected = 1.0;
    if (c.tau == MultiIndex{1, 1}) expected = 0.2;
    EXPECT_NEAR(c.value, expected, 1e-9);
  });
  EXPECT_NEAR(set.total_energy(), 1.04, 1e-9);
}

TEST(Contracted, ShellOrderOfOutput) {
  const GaussianIdentity target(3);
  const TensorGrid grid(gauss_hermite(4), 3, GridWeighting::kHermite);
  const HermiteTable table = table_for(grid, 3);
  const auto samples = sample_root_density(target, grid);
  const auto all = contract_samples(samples, grid, table, 0, 3);
  std::vector<MultiIndex> expected;
  for (int d = 0; d <= 3; ++d) {
    for (auto& t : enumerate_shell(3, d)) expected.push_back(t);
  }
  ASSERT_EQ(all.size(), expected.size());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i].tau, expected[i]);
  const auto shell2 = contract_samples(samples, grid, table, 2, 2);
  ASSERT_EQ(shell2.size(), 6u);
  EXPECT_EQ(shell2.front().tau, (MultiIndex{2, 0, 0}));
  EXPECT_TRUE(contract_samples(samples, grid, table, 3, 2).empty());
}

TEST(Contracted, AgreesWithNaiveAcrossTargets) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  struct Case { int order, dim; unsigned degree; };
  for (const Case c : {Case{10, 1, 8}, Case{6, 2, 8}, Case{5, 3, 6}, Case{4, 4, 5}}) {
    // A smooth, non-polynomial log density.
    std::vector<double> a(static_cast<std::size_t>(c.dim));
    for (double& v : a) v = u(rng);
    const FunctionTarget target(c.dim, [a](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) s += -0.7 * x[k] * x[k] + a[k] * x[k] + 0.1 * std::sin(x[k]);
      return s;
    });
    for (GridWeighting w : {GridWeighting::kHermite, GridWeighting::kHalfGaussian}) {
      const TensorGrid grid(gauss_hermite(c.order), c.dim, w);
      const HermiteTable table = table_for(grid, c.degree);
      const CoefficientSet set = coefficients_contracted(target, grid, table, c.degree);
      std::vector<MultiIndex> taus;
      set.for_each([&](const Coefficient& k) { taus.push_back(k.tau); });
      const auto naive = coefficients_streaming(target, grid, table, taus);
      std::size_t i = 0;
      set.for_each([&](const Coefficient& k) {
        EXPECT_NEAR(k.value, naive[i++], 1e-10) << c.order << "/" << c.dim;
      });
    }
  }
}

TEST(Contracted, CapacityCap) {
  const GaussianIdentity target(3);
  const TensorGrid grid(gauss_hermite(5), 3, GridWeighting::kHermite);
  const HermiteTable table = table_for(grid, 2);
  EXPECT_THROW(coefficients_contracted(target, grid, table, 2, 1, 124), CapacityError);
  EXPECT_NO_THROW(coefficients_contracted(target, grid, table, 2, 1, 125));
}

TEST(Contracted, DiscreteParsevalOverTheFullBox) {
  // Over every tau with entries below the order, the coefficients are an
  // orthogonal change of basis of the weighted samples, so their energy is
  // the quadrature estimate of the integral of P.
  const GmmFixture fx;
  const int order = 5;
  const TensorGrid grid(gauss_hermite(order), 3, GridWeighting::kHermite);
  const HermiteTable table = table_for(grid, 3 * (order - 1));
  const auto samples = sample_root_density(fx.target, grid);
  const auto all = contract_samples(samples, grid, table, 0, 3 * (order - 1));
  double box_energy = 0.0;
  for (const auto& c : all) {
    if (c.tau.max_entry() < static_cast<unsigned>(order)) box_energy += c.value * c.value;
  }
  double quad = 0.0;
  const auto w = grid.axis_weights();
  grid.for_each(0, grid.size(), [&](std::uint64_t lin, std::span<const int> idx, auto) {
    quad += w[idx[0]] * w[idx[1]] * w[idx[2]] * samples[lin] * samples[lin];
  });
  EXPECT_NEAR(box_energy, quad, 1e-12 * quad);
}

TEST(Streaming, WorkerCountDoesNotChangeBits) {
  const GmmFixture fx;
  const TensorGrid grid(gauss_hermite(30), 3, GridWeighting::kHermite);
  const HermiteTable table = table_for(grid, 3);
  std::vector<MultiIndex> taus;
  for (int d = 0; d <= 3; ++d) {
    for (auto& t : enumerate_shell(3, d)) taus.push_back(t);
  }
  const auto one = coefficients_streaming(fx.target, grid, table, taus, 1);
  for (unsigned workers : {2u, 3u, 8u}) {
    const auto many = coefficients_streaming(fx.target, grid, table, taus, workers);
    for (std::size_t i = 0; i < taus.size(); ++i) EXPECT_EQ(one[i], many[i]);
  }
}

TEST(RunOpaa, GaussianIdentityConvergesAtDegreeTwo) {
  for (int dim = 1; dim <= 3; ++dim) {
    OpaaOptions opt;
    opt.quad_order = 4;
    opt.tol = 1e-10;
    const OpaaResult r = run_opaa(GaussianIdentity(dim), opt);
    EXPECT_TRUE(r.converged());
    EXPECT_EQ(r.max_degree_reached, 2);
    EXPECT_NEAR(r.evidence, 1.0, 1e-10);
    EXPECT_EQ(r.coefficients.shell_energy().size(), 3u);
    EXPECT_EQ(r.path_used, CoefficientPath::kContracted);
  }
}

TEST(RunOpaa, PlantedEvidence) {
  OpaaOptions opt;
  opt.quad_order = 4;
  opt.tol = 1e-10;
  const OpaaResult r = run_opaa(planted_1d(), opt);
  EXPECT_TRUE(r.converged());
  EXPECT_NEAR(r.evidence, 1.01, 1e-10);
  EXPECT_EQ(r.max_degree_reached, 4);
}

TEST(RunOpaa, MaxDegreeZeroStopsEarly) {
  OpaaOptions opt;
  opt.quad_order = 4;
  opt.max_degree = 0;
  const OpaaResult r = run_opaa(planted_1d(), opt);
  EXPECT_EQ(r.stop, StopReason::kMaxDegree);
  EXPECT_FALSE(r.converged());
  EXPECT_NEAR(r.evidence, 1.0, 1e-12);
}

TEST(RunOpaa, StreamingPathMatchesContraction) {
  const GmmFixture fx;
  OpaaOptions opt;
  opt.quad_order = 7;
  opt.max_degree = 6;
  opt.path = CoefficientPath::kContracted;
  const OpaaResult c = run_opaa(fx.target, opt);
  opt.path = CoefficientPath::kStreaming;
  const OpaaResult s = run_opaa(fx.target, opt);
  EXPECT_EQ(s.path_used, CoefficientPath::kStreaming);
  ASSERT_EQ(c.coefficients.size(), s.coefficients.size());
  std::vector<Coefficient> cs;
  c.coefficients.for_each([&](const Coefficient& k) { cs.push_back(k); });
  std::size_t i = 0;
  s.coefficients.for_each([&](const Coefficient& k) {
    EXPECT_EQ(k.tau, cs[i].tau);
    EXPECT_NEAR(k.value, cs[i].value, 1e-10);
    ++i;
  });
  // A cap below the grid size sends kAuto down the streaming path.
  opt.path = CoefficientPath::kAuto;
  opt.max_stored_samples = 100;
  EXPECT_EQ(run_opaa(fx.target, opt).path_used, CoefficientPath::kStreaming);
}

TEST(RunOpaa, WorkerCountDoesNotChangeBits) {
  const GmmFixture fx;
  for (CoefficientPath path : {CoefficientPath::kContracted, CoefficientPath::kStreaming}) {
    OpaaOptions opt;
    opt.quad_order = 6;
    opt.max_degree = 5;
    opt.path = path;
    opt.workers = 1;
    const OpaaResult base = run_opaa(fx.target, opt);
    for (unsigned w : {2u, 8u}) {
      opt.workers = w;
      const OpaaResult r = run_opaa(fx.target, opt);
      EXPECT_EQ(r.evidence, base.evidence);
      std::vector<double> a, b;
      base.coefficients.for_each([&](const Coefficient& k) { a.push_back(k.value); });
      r.coefficients.for_each([&](const Coefficient& k) { b.push_back(k.value); });
      EXPECT_EQ(a, b);
    }
  }
}

TEST(RunOpaa, EnergyIsMonotoneInMaxDegree) {
  const GmmFixture fx;
  double previous = 0.0;
  for (int d = 0; d <= 8; ++d) {
    OpaaOptions opt;
    opt.quad_order = 6;
    opt.max_degree = d;
    opt.tol = 1e-300;
    const double e = run_opaa(fx.target, opt).evidence;
    EXPECT_GE(e, previous);
    previous = e;
  }
}

TEST(RunOpaa, AffineInvariance) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  const GaussianIdentity target(2);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<double> s{scale(rng), scale(rng)};
    std::vector<double> b{shift(rng), shift(rng)};
    if (trial == 0) s = {0.5, 2.0};
    OpaaOptions opt;
    opt.quad_order = 64;
    opt.max_degree = 60;
    opt.tol = 1e-14;
    opt.precondition = AffineMap(s, b);
    const OpaaResult r = run_opaa(target, opt);
    EXPECT_NEAR(r.evidence, 1.0, 1e-6) << s[0] << "," << s[1] << " " << b[0] << "," << b[1];
  }
}

TEST(RunOpaa, PreconditionerIsApplied) {
  // N(5, 0.3^2) times 7: far from the nodes without a map, exact with one.
  const double sd = 0.3, mu = 5.0;
  const FunctionTarget target(1, [=](std::span<const double> x) {
    const double z = (x[0] - mu) / sd;
    return std::log(7.0) - 0.5 * z * z - std::log(sd * std::sqrt(2.0 * std::numbers::pi));
  });
  OpaaOptions opt;
  opt.quad_order = 4;
  opt.tol = 1e-12;
  opt.precondition = AffineMap::from_moments(std::vector<double>{mu}, std::vector<double>{sd});
  const OpaaResult r = run_opaa(target, opt);
  EXPECT_TRUE(r.converged());
  EXPECT_NEAR(r.evidence, 7.0, 1e-12);
}

TEST(RunOpaa, DegenerateTargetThrows) {
  const FunctionTarget zero(2, [](std::span<const double>) { return -kInf; });
  OpaaOptions opt;
  opt.max_degree = 3;
  EXPECT_THROW(run_opaa(zero, opt), DegenerateTargetError);
}

TEST(RunOpaa, RejectsBadOptions) {
  const GaussianIdentity target(1);
  OpaaOptions opt;
  opt.tol = 0.0;
  EXPECT_THROW(run_opaa(target, opt), InvalidArgument);
  opt = {};
  opt.max_degree = -1;
  EXPECT_THROW(run_opaa(target, opt), InvalidArgument);
  opt = {};
  opt.quad_order = 0;
  EXPECT_THROW(run_opaa(target, opt), InvalidArgument);
  opt = {};
  opt.precondition = AffineMap::identity(2);
  EXPECT_THROW(run_opaa(target, opt), InvalidArgument);
}

}  // namespace
}  // namespace opaa
