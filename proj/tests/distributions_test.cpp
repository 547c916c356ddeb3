#include "fhist/bigint.hpp"
#include "fhist/counting.hpp"
#include "fhist/distribution.hpp"
#include "fhist/error.hpp"
#include "fhist/pattern.hpp"
#include "fhist/radii.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace fhist {
namespace {

using testing::grid_ks;
using testing::random_distribution;
using testing::Rng;

Distribution linear_density() {
  // density 2x, as 400 thin bins evaluated at their midpoints
  std::vector<double> breaks, dens;
  const int bins = 400;
  for (int i = 0; i <= bins; ++i) breaks.push_back(static_cast<double>(i) / bins);
  for (int i = 0; i < bins; ++i) dens.push_back(2.0 * (i + 0.5) / bins);
  return Distribution::piecewise(breaks, dens);
}

double midpoint_integral(const std::function<double(double)>& f, int steps = 200000) {
  double acc = 0.0;
  for (int i = 0; i < steps; ++i) acc += f((i + 0.5) / steps);
  return acc / steps;
}

TEST(Distribution, Validation) {
  EXPECT_THROW(Distribution::piecewise({0.0, 1.0}, {0.5}), ValidationError);
  EXPECT_THROW(Distribution::piecewise({0.0, 0.5, 0.4, 1.0}, {1, 1, 1}), ValidationError);
  EXPECT_THROW(Distribution::empirical({}), ValidationError);
  EXPECT_THROW(Distribution::empirical({1.5}), ValidationError);
  EXPECT_NO_THROW(Distribution::piecewise({0.0, 0.5, 1.0}, {1.5, 0.5}));
}

TEST(Ks, Examples) {
  const auto u = Distribution::uniform();
  EXPECT_EQ(ks_distance(u, u), 0.0);
  EXPECT_DOUBLE_EQ(ks_distance(Distribution::point_mass(0.0), u), 1.0);
  EXPECT_NEAR(ks_distance(Distribution::empirical({0.2, 0.4}), u), 0.6, 1e-12);
}

TEST(Ks, MatchesGridScan) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    auto p = random_distribution(rng), q = random_distribution(rng);
    EXPECT_NEAR(ks_distance(p, q), grid_ks(p, q), 1e-9);
  }
}

TEST(Ks, MetricOnRandomTriples) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    auto a = random_distribution(rng), b = random_distribution(rng), c = random_distribution(rng);
    EXPECT_NEAR(ks_distance(a, b), ks_distance(b, a), 1e-12);
    EXPECT_LE(ks_distance(a, c), ks_distance(a, b) + ks_distance(b, c) + 1e-12);
    EXPECT_NEAR(ks_distance(a, a), 0.0, 1e-12);
  }
}

TEST(Wasserstein, Examples) {
  const auto u = Distribution::uniform();
  EXPECT_EQ(wasserstein1(u, u), 0.0);
  EXPECT_DOUBLE_EQ(wasserstein1(Distribution::point_mass(0.0), Distribution::point_mass(1.0)), 1.0);
  EXPECT_NEAR(wasserstein1(Distribution::point_mass(0.0), u), 0.5, 1e-12);
}

TEST(Wasserstein, MatchesIntegralAndIsBelowKs) {
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    auto p = random_distribution(rng), q = random_distribution(rng);
    const double w = wasserstein1(p, q);
    const double num = midpoint_integral([&](double x) { return std::abs(p.cdf(x) - q.cdf(x)); });
    EXPECT_NEAR(w, num, 2e-5);
    EXPECT_LE(w, ks_distance(p, q) + 1e-12);
  }
}

TEST(Concentration, Examples) {
  const auto u = Distribution::uniform();
  for (double a : {0.0, 0.1, 0.37, 1.0}) EXPECT_NEAR(concentration(u, a), a, 1e-12);
  for (double a : {0.0, 0.2, 1.0}) EXPECT_EQ(concentration(Distribution::point_mass(0.3), a), 1.0);
  const auto lin = linear_density();
  for (double a : {0.1, 0.25, 0.5, 0.8}) EXPECT_NEAR(concentration(lin, a), 2 * a - a * a, 1e-5);
}

TEST(Concentration, MonotoneAndFullAtOne) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    auto p = random_distribution(rng);
    double prev = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double s = concentration(p, i / 20.0);
      EXPECT_GE(s, prev - 1e-12);
      prev = s;
    }
    EXPECT_NEAR(concentration(p, 1.0), 1.0, 1e-12);
  }
}

TEST(Concentration, MatchesWindowScan) {
  Rng rng(10);
  for (int t = 0; t < 100; ++t) {
    auto p = random_distribution(rng);
    const double a = std::uniform_real_distribution<double>(0.01, 0.9)(rng);
    double best = 0.0;
    const int steps = 4000;
    for (int i = 0; i <= steps; ++i) {
      const double x = (1.0 - a) * i / steps;
      best = std::max(best, p.cdf(x + a) - p.cdf_left(x));
    }
    for (double x : p.knots())
      for (double lo : {x, x - a})
        if (lo >= 0.0 && lo + a <= 1.0) best = std::max(best, p.cdf(lo + a) - p.cdf_left(lo));
    EXPECT_NEAR(concentration(p, a), best, 1e-9);
  }
}

TEST(Moments, Examples) {
  auto u = moment_vector(Distribution::uniform(), 6);
  for (int m = 1; m <= 6; ++m) EXPECT_NEAR(u[m - 1], 1.0 / (m + 1), 1e-15);
  auto pm = moment_vector(Distribution::point_mass(0.7), 5);
  for (int m = 1; m <= 5; ++m) EXPECT_NEAR(pm[m - 1], std::pow(0.7, m), 1e-15);
  auto lin = moment_vector(linear_density(), 4);
  for (int m = 1; m <= 4; ++m) EXPECT_NEAR(lin[m - 1], 2.0 / (m + 2), 1e-5);
}

TEST(Moments, MatchIntegralAndDecrease) {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    auto p = random_distribution(rng);
    auto mv = moment_vector(p, 8);
    for (int m = 1; m <= 8; ++m) {
      // E X^m = integral of m x^(m-1) (1 - F(x))
      const double num = midpoint_integral([&](double x) { return m * std::pow(x, m - 1) * (1.0 - p.cdf(x)); });
      EXPECT_NEAR(mv[m - 1], num, 1e-4);
      EXPECT_GE(mv[m - 1], 0.0);
      EXPECT_LE(mv[m - 1], 1.0);
      if (m > 1) EXPECT_LE(mv[m - 1], mv[m - 2] + 1e-15);
    }
  }
}

TEST(CCoefficients, EdgeExact) {
  auto printed = c_coefficients_exact(named_pattern("edge"), 2, CopyNormalization::kPrintedRatio);
  EXPECT_EQ(printed[0], Rational(1));
  EXPECT_EQ(printed[1], Rational(1, 2));
  auto rooted = c_coefficients_exact(named_pattern("edge"), 4);
  for (const auto& c : rooted) EXPECT_EQ(c, Rational(1));
}

TEST(CCoefficients, MatchLargeNRatio) {
  for (const char* name : {"edge", "triangle", "path3", "star3"}) {
    auto f = named_pattern(name);
    const int d = f.order() == 4 ? 3 : 4;
    auto printed = c_coefficients(f, d, CopyNormalization::kPrintedRatio);
    auto rooted = c_coefficients(f, d);
    for (int m = 1; m <= d; ++m) {
      auto fm = merge_at_root(f, m);
      const long long n = 2000000;
      // n b^m / (a_m c_{F^m,n} m!) with c_{F^m,n} a_m = (n)_R
      double log_ratio = std::log(static_cast<double>(n));
      log_ratio += m * std::log(to_double(extremal_counts(f, n).b_max));
      for (int i = 0; i < fm.order(); ++i) log_ratio -= std::log(static_cast<double>(n - i));
      log_ratio -= std::lgamma(m + 1.0);
      EXPECT_NEAR(printed[m - 1], std::exp(log_ratio), 1e-3 * printed[m - 1]) << name << " m=" << m;
      EXPECT_NEAR(rooted[m - 1], std::exp(log_ratio + std::lgamma(m + 1.0)) * std::pow(f.root_aut_count, m),
                  1e-3 * rooted[m - 1]);
      const double top = m * (f.order() - 1) + 1;
      EXPECT_LE(std::log(printed[m - 1]), top * std::log(top));
    }
  }
}

TEST(Phi, Examples) {
  auto u = phi_vector(Distribution::uniform(), named_pattern("edge"), 1);
  EXPECT_DOUBLE_EQ(u.phi[0], 0.5);
  auto pm = phi_vector(Distribution::point_mass(1.0), named_pattern("edge"), 2, CopyNormalization::kPrintedRatio);
  EXPECT_DOUBLE_EQ(pm.phi[0], 1.0);
  EXPECT_DOUBLE_EQ(pm.phi[1], 0.5);
}

TEST(KsBound, Examples) {
  const auto u = Distribution::uniform();
  const double raw = 51.0 * (0.5 + std::exp(2.0) * std::pow(2.0, 11) / (3628800.0 * 10.0));
  EXPECT_NEAR(ks_upper_bound(u, 0.0, 10, 2.0, kEsseenConstant, false), raw, 1e-9);
  EXPECT_NEAR(raw, 25.521268, 1e-6);
  EXPECT_EQ(ks_upper_bound(u, 0.0, 10, 2.0), 1.0);
  for (double T : {1.5, 3.0, 10.0}) {
    double prev = 0.0;
    for (double g : {0.0, 1e-4, 1e-2, 0.1}) {
      const double b = ks_upper_bound(u, g, 4, T, kEsseenConstant, false);
      EXPECT_GE(b, prev);
      prev = b;
    }
    EXPECT_NEAR(ks_upper_bound(u, 0.0, 200, T, kEsseenConstant, false), 51.0 / T, 1e-9);
  }
}

TEST(GammaRadii, Examples) {
  const auto u = Distribution::uniform();
  auto g = gamma_radii(u, named_pattern("edge"), 1, 0.3);
  EXPECT_NEAR(g[0], 0.3, 1e-15);
  EXPECT_EQ(gamma_radii(u, named_pattern("triangle"), 3, 0.0).norm(), 0.0);
  auto g1 = gamma_radii(u, named_pattern("triangle"), 3, 0.1), g2 = gamma_radii(u, named_pattern("triangle"), 3, 0.2);
  EXPECT_TRUE(g2.isApprox(2.0 * g1, 1e-14));
  EXPECT_THROW(gamma_radii(Distribution::piecewise({0.0, 0.5, 1.0}, {2.0, 0.0}), named_pattern("edge"), 1, 0.1),
               ValidationError);
  EXPECT_THROW(gamma_radii(Distribution::point_mass(0.5), named_pattern("edge"), 1, 0.1), ValidationError);
}

TEST(GammaRadii, FiniteSlack) {
  const auto c = c_coefficients(named_pattern("triangle"), 2);
  EXPECT_NEAR(finite_n_slack(c, 7), 10.0 / 7.0, 1e-15);
  EXPECT_NEAR(finite_n_slack(c, 1000, 5.0), 0.005, 1e-15);
}

TEST(BetaRadii, FeasibilityRegimes) {
  const auto u = Distribution::uniform();
  auto small = beta_radii(u, named_pattern("edge"), 2, 0.4);
  EXPECT_FALSE(small.feasible);
  EXPECT_EQ(small.beta.norm(), 0.0);

  auto big = beta_radii(u, named_pattern("edge"), 500, 1.0);
  ASSERT_TRUE(big.feasible);
  EXPECT_GT(big.T, 51.0);
  for (int m = 0; m < 500; ++m) EXPECT_GT(big.beta[m], 0.0);
  auto gamma = gamma_radii(u, named_pattern("edge"), 500, 1.0);
  for (int m = 0; m < 500; ++m) EXPECT_LE(big.beta[m], gamma[m]);

  // objective at the reported T, recomputed from the formula
  const double T = big.T;
  const double tail = std::exp(501 * std::log(T) - std::lgamma(501.0) - std::log(500.0));
  EXPECT_NEAR(big.objective, std::exp(-T) * (1.0 / 51.0 - 1.0 / T) - tail, 1e-15);
}

TEST(BetaRadii, GridOptimumIsNotBeaten) {
  const auto u = Distribution::uniform();
  auto big = beta_radii(u, named_pattern("edge"), 400, 1.0);
  ASSERT_TRUE(big.feasible);
  for (double T = 51.5; T < 400.0; T *= 1.01) {
    const double tail = std::exp(401 * std::log(T) - std::lgamma(401.0) - std::log(400.0));
    EXPECT_LE(std::exp(-T) * (1.0 / 51.0 - 1.0 / T) - tail, big.objective * (1 + 1e-9) + 1e-300);
  }
}

TEST(MomentKs, SelfAndForwardDirection) {
  const auto u = Distribution::uniform();
  auto self = ks_implies_moments_close(u, u, 5);
  EXPECT_EQ(self.ks, 0.0);
  EXPECT_EQ(self.max_gap, 0.0);
  Rng rng(14);
  for (int t = 0; t < 300; ++t) {
    auto p = random_distribution(rng), q = random_distribution(rng);
    auto audit = ks_implies_moments_close(p, q, 10);
    EXPECT_TRUE(audit.gaps_within_ks);
    EXPECT_TRUE(audit.gaps_within_w1);
    auto rev = moments_close_implies_ks(p, q, 10);
    EXPECT_TRUE(rev.ks_within_bound);
  }
}

}  // namespace
}  // namespace fhist
