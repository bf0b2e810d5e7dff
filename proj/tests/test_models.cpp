#include "opaa/models.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "opaa/errors.hpp"
#include "opaa/hermite.hpp"

namespace opaa {
namespace {

const double kLogInvSqrt2Pi = -0.5 * std::log(2.0 * std::numbers::pi);

TEST(GaussianIdentity, LogDensity) {
  const GaussianIdentity g(3);
  const std::vector<double> x{0.5, -1.0, 2.0};
  EXPECT_NEAR(g.log_density(x), -5.25 - 1.5 * std::log(std::numbers::pi), 1e-14);
  EXPECT_THROW(GaussianIdentity(0), InvalidArgument);
}

TEST(PlantedDensity, SingleConstantEqualsGaussianIdentity) {
  const GaussianIdentity g(2);
  const PlantedDensity p(2, {{MultiIndex{0, 0}, 1.0}});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    EXPECT_NEAR(p.log_density(x), g.log_density(x), 1e-14 * std::max(1.0, std::abs(g.log_density(x))));
  }
}

TEST(PlantedDensity, ValueAtOrigin) {
  const PlantedDensity p(1, {{MultiIndex{0}, 1.0}, {MultiIndex{2}, 0.1}});
  const double q0 = std::pow(std::numbers::pi, -0.25) * (1.0 - 0.1 / std::numbers::sqrt2);
  const std::vector<double> x{0.0};
  EXPECT_NEAR(p.log_density(x), 2.0 * std::log(q0), 1e-14);
  EXPECT_NEAR(p.q(x), q0, 1e-15);
  EXPECT_NEAR(p.planted_evidence(), 1.01, 1e-15);
}

TEST(PlantedDensity, LogDensityMatchesPolynomialForm) {
  const PlantedDensity p(2, {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 1}, 0.2}, {MultiIndex{0, 3}, -0.05}});
  for (double a = -4.0; a <= 4.0; a += 0.5) {
    for (double b = -4.0; b <= 4.0; b += 0.5) {
      const std::vector<double> x{a, b};
      const double q = p.q(x);
      const double ref = 2.0 * std::log(std::abs(q)) - a * a - b * b;
      EXPECT_NEAR(p.log_density(x), ref, 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(PlantedDensity, ZeroOfQIsNegativeInfinity) {
  // q = h_1 vanishes at the origin.
  const PlantedDensity p(1, {{MultiIndex{1}, 1.0}});
  EXPECT_EQ(p.log_density(std::vector<double>{0.0}), -std::numeric_limits<double>::infinity());
}

TEST(PlantedDensity, Positivity) {
  const PlantedDensity one(1, {{MultiIndex{0}, 1.0}, {MultiIndex{2}, 0.1}});
  EXPECT_GT(one.min_on_box(10.0), 0.0);
  const PlantedDensity two(2, {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 1}, 0.2}});
  // q = pi^{-1/2} (1 + 0.4 xy) goes negative once xy < -2.5.
  EXPECT_LT(two.min_on_box(3.0, 301), 0.0);
  EXPECT_GT(two.min_on_grid(TensorGrid(gauss_hermite(3), 2, GridWeighting::kHermite)), 0.0);
  EXPECT_LT(two.min_on_grid(TensorGrid(gauss_hermite(4), 2, GridWeighting::kHermite)), 0.0);
}

TEST(PlantedDensity, Validation) {
  EXPECT_THROW(PlantedDensity(1, {{MultiIndex{0, 0}, 1.0}}), InvalidArgument);
  EXPECT_THROW(PlantedDensity(1, {{MultiIndex{1}, 1.0}, {MultiIndex{1}, 2.0}}), InvalidArgument);
  EXPECT_THROW(PlantedDensity(1, {{MultiIndex{1}, std::nan("")}}), InvalidArgument);
}

TEST(Gmm, LogJointExamples) {
  EXPECT_NEAR(gmm_log_joint(GmmModel{1, 1.0, 1.0, {}}, std::vector<double>{0.0}), kLogInvSqrt2Pi, 1e-15);
  EXPECT_NEAR(gmm_log_joint(GmmModel{1, 1.0, 1.0, {0.0}}, std::vector<double>{0.0}),
              2.0 * kLogInvSqrt2Pi, 1e-15);
}

TEST(Gmm, LogJointAgainstDirectProduct) {
  const GmmModel m{2, 3.0, 0.7, {-1.0, 0.2, 2.5}};
  const std::vector<double> mu{-0.8, 2.0};
  const auto npdf = [](double x, double mean, double s) {
    return std::exp(-0.5 * (x - mean) * (x - mean) / (s * s)) / (s * std::sqrt(2.0 * std::numbers::pi));
  };
  double p = npdf(mu[0], 0.0, 3.0) * npdf(mu[1], 0.0, 3.0);
  for (double x : m.observations) p *= 0.5 * (npdf(x, mu[0], 0.7) + npdf(x, mu[1], 0.7));
  EXPECT_NEAR(gmm_log_joint(m, mu), std::log(p), 1e-13);
}

TEST(Gmm, PermutationSymmetryIsExact) {
  const GmmModel m{3, 10.0, 1.0, {-18.0, 3.5, 4.1, 8.9, 9.2}};
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(0.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> mu{z(rng), z(rng), z(rng)};
    std::sort(mu.begin(), mu.end());
    const double base = gmm_log_joint(m, mu);
    EXPECT_TRUE(std::isfinite(base));
    while (std::next_permutation(mu.begin(), mu.end())) EXPECT_EQ(gmm_log_joint(m, mu), base);
  }
}

TEST(Gmm, FarFromDataStaysFinite) {
  const GmmModel m{2, 10.0, 1.0, {0.0, 1.0}};
  // exp underflows here, the log does not.
  const double lp = gmm_log_joint(m, std::vector<double>{300.0, -300.0});
  EXPECT_TRUE(std::isfinite(lp));
  EXPECT_LT(lp, -1e4);
}

TEST(Gmm, Validation) {
  EXPECT_THROW(GmmTarget(GmmModel{0, 1.0, 1.0, {}}), InvalidArgument);
  EXPECT_THROW(GmmTarget(GmmModel{1, -1.0, 1.0, {}}), InvalidArgument);
  EXPECT_THROW(GmmTarget(GmmModel{1, 1.0, 0.0, {}}), InvalidArgument);
  EXPECT_THROW(GmmTarget(GmmModel{1, 1.0, 1.0, {std::nan("")}}), InvalidArgument);
  EXPECT_THROW(gmm_log_joint(GmmModel{2, 1.0, 1.0, {}}, std::vector<double>{0.0}), InvalidArgument);
}

TEST(Gmm, SampleDataset) {
  const auto a = gmm_sample_dataset(3, 10.0, 1.0, 50, 42);
  const auto b = gmm_sample_dataset(3, 10.0, 1.0, 50, 42);
  EXPECT_EQ(a.mu_true, b.mu_true);
  EXPECT_EQ(a.observations, b.observations);
  EXPECT_EQ(a.mu_true.size(), 3u);
  EXPECT_EQ(a.observations.size(), 50u);
  const auto c = gmm_sample_dataset(3, 10.0, 1.0, 50, 43);
  EXPECT_NE(a.observations, c.observations);
  EXPECT_TRUE(gmm_sample_dataset(2, 1.0, 1.0, 0, 1).observations.empty());
  // Every observation is within a few obs_sigma of some mean.
  for (double x : a.observations) {
    double best = 1e300;
    for (double m : a.mu_true) best = std::min(best, std::abs(x - m));
    EXPECT_LT(best, 6.0);
  }
}

TEST(Gmm, ReferenceMeansFixture) {
  EXPECT_EQ(kReferenceClusterMeans.size(), 3u);
  EXPECT_DOUBLE_EQ(kReferenceClusterMeans[0], -18.61);
  // The fixture is a valid point of the three-cluster joint.
  GmmModel m{3, 10.0, 1.0, {}};
  for (double mu : kReferenceClusterMeans) {
    for (double d : {-0.5, 0.0, 0.5}) m.observations.push_back(mu + d);
  }
  EXPECT_TRUE(std::isfinite(
      gmm_log_joint(m, std::vector<double>(kReferenceClusterMeans.begin(), kReferenceClusterMeans.end()))));
}

TEST(Gmm, SingleClusterPosterior) {
  const GmmModel m{1, 2.0, 1.0, {1.0, 2.0, 3.0}};
  const auto post = gmm_single_cluster_posterior(m);
  // Precision 1/4 + 3, mean 6 / 3.25.
  EXPECT_NEAR(post.mean, 6.0 / 3.25, 1e-15);
  EXPECT_NEAR(post.sd, 1.0 / std::sqrt(3.25), 1e-15);
  EXPECT_THROW(gmm_single_cluster_posterior(GmmModel{2, 1.0, 1.0, {}}), InvalidArgument);
}

TEST(GmmPreconditioner, Cases) {
  const auto one = gmm_data_preconditioner(GmmModel{1, 2.0, 1.0, {1.0, 2.0, 3.0}});
  EXPECT_NEAR(one.shift()[0], 6.0 / 3.25, 1e-15);
  EXPECT_NEAR(one.scale()[0], std::numbers::sqrt2 / std::sqrt(3.25), 1e-15);

  const auto prior = gmm_data_preconditioner(GmmModel{2, 10.0, 1.0, {}});
  EXPECT_EQ(prior.shift(), (std::vector<double>{0.0, 0.0}));
  EXPECT_NEAR(prior.scale()[1], 10.0 * std::numbers::sqrt2, 1e-14);

  const auto sparse = gmm_data_preconditioner(GmmModel{2, 10.0, 1.0, {2.7}});
  EXPECT_NEAR(sparse.shift()[0], 2.7, 1e-15);
  EXPECT_NEAR(sparse.scale()[0], std::sqrt(10.0) * std::numbers::sqrt2, 1e-14);

  // n = 4, K = 2: width 1 / sqrt(2), extent 3 / 2 + 1.
  const auto data = gmm_data_preconditioner(GmmModel{2, 10.0, 1.0, {-1.0, 2.0, 0.0, 1.0}}, 2.0);
  EXPECT_NEAR(data.shift()[0], 0.5, 1e-15);
  EXPECT_NEAR(data.scale()[1], 2.0 * std::sqrt(2.5 / std::sqrt(2.0)) * std::numbers::sqrt2, 1e-14);
  EXPECT_THROW(gmm_data_preconditioner(GmmModel{2, 10.0, 1.0, {}}, 0.0), InvalidArgument);
}

TEST(AffineMap, RoundTripAndJacobian) {
  const AffineMap m({0.5, 2.0, 3.0}, {1.0, -1.0, 0.0});
  EXPECT_NEAR(m.log_jacobian(), std::log(3.0), 1e-15);
  const std::vector<double> t{0.3, -0.7, 2.0};
  std::vector<double> x(3), back(3);
  m.forward(t, x);
  EXPECT_EQ(x, (std::vector<double>{1.15, -2.4, 6.0}));
  m.inverse(x, back);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(back[k], t[k], 1e-15);
  const AffineMap id = AffineMap::identity(2);
  EXPECT_EQ(id.log_jacobian(), 0.0);
}

TEST(AffineMap, Validation) {
  EXPECT_THROW(AffineMap({1.0}, {0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(AffineMap({0.0}, {0.0}), InvalidArgument);
  EXPECT_THROW(AffineMap({-1.0}, {0.0}), InvalidArgument);
  EXPECT_THROW(AffineMap({1.0}, {std::nan("")}), InvalidArgument);
  EXPECT_THROW(AffineMap({}, {}), InvalidArgument);
}

TEST(PreconditionedTarget, AddsLogJacobian) {
  const GaussianIdentity g(2);
  const AffineMap m({2.0, 0.5}, {1.0, 0.0});
  const PreconditionedTarget p(g, m);
  const std::vector<double> t{0.25, 1.0};
  const std::vector<double> x{1.5, 0.5};
  EXPECT_NEAR(p.log_density(t), g.log_density(x) + std::log(1.0), 1e-15);
  EXPECT_THROW(PreconditionedTarget(g, AffineMap::identity(3)), InvalidArgument);
}

}  // namespace
}  // namespace opaa
