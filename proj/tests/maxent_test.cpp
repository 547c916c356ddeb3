#include "fhist/error.hpp"
#include "fhist/maxent.hpp"
#include "fhist/mean_density.hpp"
#include "fhist/pattern.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace fhist {
namespace {

using testing::constant_type;
using testing::h_nats;
using testing::random_type;
using testing::Rng;

std::vector<Graph> family_of(std::initializer_list<const char*> names) {
  std::vector<Graph> out;
  for (const char* n : names) out.push_back(named_pattern(n).graph);
  return out;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

TEST(Entropy, Examples) {
  auto half = entropy(constant_type(3, 0.5));
  EXPECT_NEAR(half.H, 3 * std::log(2.0), 1e-15);
  EXPECT_NEAR(half.per_edge, 3 * std::log(2.0) / 9, 1e-15);
  EXPECT_NEAR(half.H, 2.0794415, 1e-7);
  EXPECT_NEAR(half.per_edge, 0.2310491, 1e-7);
  EXPECT_EQ(entropy(constant_type(5, 0.0)).H, 0.0);
  EXPECT_EQ(entropy(constant_type(5, 1.0)).H, 0.0);
  Eigen::MatrixXd s(3, 3);
  s << 0, .2, .4, .2, 0, .6, .4, .6, 0;
  EXPECT_NEAR(entropy(s).H, h_nats(.2) + h_nats(.4) + h_nats(.6), 1e-15);
  EXPECT_NEAR(entropy(s).H, 1.8464, 1e-4);
  EXPECT_NEAR(upper_l1(s), 1.2, 1e-15);
}

TEST(Solver, Unconstrained) {
  for (int k : {3, 5, 8}) {
    auto spec = ConstraintSpec::make(family_of({"edge", "triangle"}), vec({0.5, 0.125}), vec({1.0, 1.0}), k);
    SolverOptions o;
    o.starts = 4;
    auto sol = solve_max_entropy(spec, o);
    ASSERT_TRUE(sol.feasible);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) EXPECT_NEAR(sol.S(i, j), 0.5, 1e-6);
    EXPECT_NEAR(sol.entropy, k * (k - 1) / 2.0 * std::log(2.0), 1e-6);
  }
}

TEST(Solver, EdgeDensityOptimumIsConstant) {
  auto spec = ConstraintSpec::make(family_of({"edge"}), vec({0.3}), vec({0.0}), 6);
  SolverOptions o;
  o.starts = 4;
  auto sol = solve_max_entropy(spec, o);
  ASSERT_TRUE(sol.feasible);
  EXPECT_NEAR(sol.entropy, 15 * h_nats(0.3), 1e-5);
  EXPECT_LE(sol.residuals[0], 1e-6);
  EXPECT_LE((sol.S - constant_type(6, 0.3)).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Solver, BeatsEveryFeasibleConstantMatrix) {
  Rng rng(3);
  for (int t = 0; t < 4; ++t) {
    const int k = 4 + t % 2;
    const double s0 = std::uniform_real_distribution<double>(0.2, 0.7)(rng);
    const Eigen::MatrixXd target = random_type(k, rng, s0 - 0.15, s0 + 0.15);
    auto fam = family_of({"edge", "triangle"});
    const Eigen::VectorXd phi = vec({mean_density(target, fam[0]), mean_density(target, fam[1])});
    const Eigen::VectorXd gamma = vec({0.02, 0.02});
    SolverOptions o;
    o.starts = 6;
    o.seed = static_cast<std::uint64_t>(t);
    auto sol = solve_max_entropy(ConstraintSpec::make(fam, phi, gamma, k), o);
    if (sol.converged) {
      EXPECT_TRUE(sol.feasible);
    }
    ASSERT_TRUE(sol.feasible);
    for (int m = 0; m < 2; ++m) EXPECT_LE(sol.residuals[m], gamma[m] + 1e-6);
    double best = -1.0;
    for (double s = 0.0; s <= 1.0; s += 1e-3) {
      if (std::abs(s - phi[0]) <= gamma[0] && std::abs(s * s * s - phi[1]) <= gamma[1])
        best = std::max(best, k * (k - 1) / 2.0 * h_nats(s));
    }
    EXPECT_GE(sol.entropy, best - 1e-7);
  }
}

TEST(Solver, StartsAreLoggedAndDeterministic) {
  auto spec = ConstraintSpec::make(family_of({"edge", "triangle"}), vec({0.4, 0.05}), vec({0.01, 0.01}), 5);
  SolverOptions o;
  o.starts = 5;
  auto a = solve_max_entropy(spec, o), b = solve_max_entropy(spec, o);
  EXPECT_EQ(a.starts.size(), 5u);
  EXPECT_EQ(a.starts[0].kind, "half");
  EXPECT_EQ(a.starts[1].kind, "constant");
  EXPECT_EQ(a.S, b.S);
  EXPECT_EQ(a.best_start, b.best_start);
}

TEST(Solver, CountingSlackWidensGamma) {
  auto spec = ConstraintSpec::make(family_of({"edge", "triangle"}), vec({0.5, 0.125}), vec({0.0, 0.0}), 4, 1e-3);
  EXPECT_NEAR(spec.counting_slack(), 5 * std::pow(1e-3, 1.0 / spec.r_bar), 1e-15);
  auto w = spec.widened();
  EXPECT_NEAR(w.gamma[1], spec.counting_slack(), 1e-15);
  EXPECT_THROW(ConstraintSpec::make(family_of({"edge"}), vec({0.5, 0.1}), vec({0.0}), 4), ValidationError);
}

void check_jacobian(const std::vector<Graph>& fam, Rng& rng, int k_min = 4) {
  const int k = k_min + static_cast<int>(rng() % 3);
  const Eigen::MatrixXd s = random_type(k, rng, 0.05, 0.95);
  auto rep = density_jacobian(s, fam);
  const double h = 1e-5;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      Eigen::MatrixXd up = s, dn = s;
      up(i, j) = up(j, i) = s(i, j) + h;
      dn(i, j) = dn(j, i) = s(i, j) - h;
      for (std::size_t m = 0; m < fam.size(); ++m) {
        const double fd = (mean_density(up, fam[m]) - mean_density(dn, fam[m])) / (2 * h);
        const double an = rep.J(pair_index(i, j, k), static_cast<int>(m));
        EXPECT_LE(std::abs(fd - an), 1e-6 * std::max(std::abs(an), 1e-3)) << i << "," << j << " m=" << m;
      }
    }
}

TEST(Jacobian, MatchesCentralDifferences) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    check_jacobian(family_of({"edge"}), rng);
    check_jacobian(family_of({"edge", "triangle"}), rng);
    check_jacobian(family_of({"triangle", "bowtie"}), rng, 5);
  }
}

TEST(Jacobian, ConstantMatrixIsRankDeficient) {
  for (double c : {0.2, 0.5, 0.9}) {
    auto rep = density_jacobian(constant_type(6, c), family_of({"edge", "triangle"}));
    EXPECT_LE(rep.sigma_min, 1e-10);
  }
  Rng rng(9);
  auto rep = density_jacobian(random_type(6, rng, 0.1, 0.9), family_of({"edge", "triangle"}));
  EXPECT_GT(rep.sigma_min, 1e-6);
  EXPECT_EQ(smallest_singular_value(Eigen::MatrixXd::Ones(1, 2)), 0.0);
}

TEST(EffectiveRadius, EdgeClosedForm) {
  Rng rng(11);
  for (int k : {4, 6}) {
    const double eps = 1e-4;
    auto r = effective_radius(random_type(k, rng, 0.2, 0.8), family_of({"edge"}), eps, 1);
    const double target = 10.0 * std::pow(eps, 0.5);
    EXPECT_NEAR(r.target, target, 1e-15);
    EXPECT_FALSE(r.sentinel);
    EXPECT_NEAR(r.rho, target * std::sqrt(k * (k - 1) / 2.0), 1e-6 * r.rho);
    EXPECT_FALSE(r.annotation.empty());
  }
}

TEST(EffectiveRadius, ConstantMatrixHitsSentinel) {
  auto r = effective_radius(constant_type(5, 0.5), family_of({"edge", "triangle"}), 1e-6, 2);
  EXPECT_TRUE(r.sentinel);
  EXPECT_EQ(r.rho, 10.0);
}

TEST(ScalarShift, Examples) {
  const int k = 5;
  auto up = scalar_shift(constant_type(k, 0.0), Graph::complete(3), 0.027);
  EXPECT_NEAR(up.alpha, 0.3, 1e-6);
  EXPECT_NEAR(up.l1_move, 0.3 * 10, 1e-5);
  EXPECT_NEAR(up.bound, 0.3 * 10, 1e-12);
  EXPECT_NEAR(up.achieved, 0.027, 1e-8);
  EXPECT_TRUE(up.within_bound);

  Rng rng(13);
  const Eigen::MatrixXd s = random_type(k, rng);
  auto same = scalar_shift(s, Graph::complete(3), mean_density(s, Graph::complete(3)));
  EXPECT_EQ(same.alpha, 0.0);
  EXPECT_EQ(same.S_bar, s);
}

TEST(ScalarShift, UpwardMovesRespectBound) {
  Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    const int k = 4 + t % 3;
    const Graph f = Graph::complete(3 + t % 2);
    const Eigen::MatrixXd s = random_type(k, rng);
    const double phi = mean_density(s, f);
    const double target = std::uniform_real_distribution<double>(phi, 1.0)(rng);
    auto r = scalar_shift(s, f, target);
    ASSERT_TRUE(r.upward);
    EXPECT_NEAR(mean_density(r.S_bar, f), target, 1e-8);
    EXPECT_LE(r.l1_move, r.bound + 1e-9);
    EXPECT_NEAR(upper_l1(r.S_bar - s), r.l1_move, 1e-12);
  }
}

TEST(ScalarShift, DownwardMovesHaveTheirOwnBound) {
  Rng rng(19);
  for (int t = 0; t < 300; ++t) {
    const int k = 4 + t % 3;
    const Graph f = Graph::complete(3 + t % 2);
    const Eigen::MatrixXd s = random_type(k, rng);
    const double phi = mean_density(s, f);
    const double target = std::uniform_real_distribution<double>(0.0, phi)(rng);
    auto r = scalar_shift(s, f, target);
    ASSERT_FALSE(r.upward);
    EXPECT_NEAR(mean_density(r.S_bar, f), target, 1e-8);
    EXPECT_LE(r.l1_move, r.downward_bound + 1e-9);
  }
}

TEST(ScalarShift, PrintedBoundFailsGoingDown) {
  Eigen::MatrixXd s(4, 4);
  s << 0, 1, 0.006, 0.005,
       1, 0, 0.017, 1,
       0.006, 0.017, 0, 1,
       0.005, 1, 1, 0;
  auto r = scalar_shift(s, Graph::complete(3), 2e-4);
  EXPECT_FALSE(r.upward);
  EXPECT_NEAR(r.achieved, 2e-4, 1e-8);
  EXPECT_GT(r.l1_move, r.bound);
  EXPECT_FALSE(r.within_bound);
  EXPECT_LE(r.l1_move, r.downward_bound);
}

TEST(Continuity, Examples) {
  Rng rng(23);
  const Eigen::MatrixXd s = random_type(4, rng);
  auto same = continuity_bound(s, s);
  EXPECT_EQ(same.bound, 0.0);
  EXPECT_EQ(same.entropy_gap, 0.0);
  Eigen::MatrixXd moved = s;
  const double shift = s(0, 1) > 0.5 ? -0.4 : 0.4;
  moved(0, 1) += shift;
  moved(1, 0) += shift;
  auto c = continuity_bound(s, moved);
  EXPECT_NEAR(c.bound, 5 * h_nats(0.4 / 64), 1e-15);
  EXPECT_NEAR(c.bound, 0.18975132, 1e-8);
}

TEST(Continuity, EntropyGapInequality) {
  Rng rng(29);
  for (int t = 0; t < 500; ++t) {
    const int k = 2 + t % 7;
    const Eigen::MatrixXd a = random_type(k, rng), b = random_type(k, rng);
    auto c = continuity_bound(a, b);
    EXPECT_TRUE(c.holds);
    EXPECT_LE(entropy(b).H - entropy(a).H, 5.0 * k * k * h_nats(upper_l1(a - b) / (4.0 * k * k)) + 1e-12);
  }
}

TEST(Combinatorial, Examples) {
  auto b = combinatorial_bounds(100, 10, 0.1, constant_type(10, 0.5));
  EXPECT_NEAR(b.log_type_count, 100 * std::log(101.0), 1e-10);
  EXPECT_NEAR(b.class_size_upper, 45 * std::log(2.0) / 100 + 0.2, 1e-15);
  EXPECT_FALSE(b.class_size_lower);  // 2 eps^4 < 4 / g at this size
  for (int k = 1; k <= 12; ++k)
    for (long long n = k * k; n <= 4000; n += 37) {
      auto c = combinatorial_bounds(n, k, 0.1, constant_type(k, 0.5));
      EXPECT_LE(c.type_count_per_edge, c.eight_k_over_n) << n << " " << k;
    }
}

TEST(Combinatorial, ClassSizeLowerWhenMeaningful) {
  const int k = 2;
  const long long n = 2000;
  const double eps = 0.3;
  auto b = combinatorial_bounds(n, k, eps, constant_type(k, 0.5));
  ASSERT_TRUE(b.class_size_lower);
  const double g = 1000;
  const double x = std::exp2(-g * g * (2 * std::pow(eps, 4) - 4 / g));
  EXPECT_NEAR(b.lower_correction, -(2 * std::log(g) + 1) * 4 / (4e6) + std::log1p(-x) / 4e6, 1e-15);
  EXPECT_LT(*b.class_size_lower, b.class_size_upper);
}

TEST(SizeBounds, InactiveGammaGivesErdosRenyiCenter) {
  const int k = 6;
  auto spec = ConstraintSpec::make(family_of({"edge"}), vec({0.5}), vec({1.0}), k);
  SolverOptions o;
  o.starts = 3;
  auto rep = densities_size_bounds(spec, 600, o);
  EXPECT_NEAR(rep.upper_center, 15 * std::log(2.0) / 36, 1e-9);
  ASSERT_TRUE(rep.lower);
  EXPECT_LE(*rep.lower, rep.upper);
  EXPECT_TRUE(rep.o_eps_flag);
}

TEST(SizeBounds, ScalarCliqueUsesScalarConstant) {
  auto spec = ConstraintSpec::make(family_of({"triangle"}), vec({0.1}), vec({0.05}), 5, 1e-6);
  SolverOptions o;
  o.starts = 3;
  auto rep = densities_size_bounds(spec, 500, o);
  ASSERT_TRUE(rep.scalar_constant);
  EXPECT_NEAR(*rep.scalar_constant, std::pow(10.0 / (1 - 0.1 - 0.05), 1.0 / 3), 1e-12);
  EXPECT_LE(*rep.lower, rep.upper);
}

TEST(SizeBounds, CenterGrowsWithGamma) {
  auto fam = family_of({"edge", "triangle"});
  double prev = -1.0;
  SolverOptions o;
  o.starts = 4;
  for (double g : {0.01, 0.02, 0.05, 0.2}) {
    auto rep = densities_size_bounds(ConstraintSpec::make(fam, vec({0.3, 0.03}), vec({g, g}), 4), 400, o);
    EXPECT_GE(rep.upper_center, prev - 1e-7);
    prev = rep.upper_center;
  }
}

TEST(SizeBounds, HistPipeline) {
  HistBoundsOptions o;
  o.solver.starts = 3;
  const auto u = Distribution::uniform();
  auto all = hist_size_bounds(u, named_pattern("edge"), 1.0, 1, 6, 0.0, 1000, o);
  EXPECT_NEAR(all.upper_center, 15 * std::log(2.0) / 36, 1e-9);
  auto tight = hist_size_bounds(u, named_pattern("edge"), 0.1, 1, 6, 0.0, 1000, o);
  // symmetric constraint around 1/2: the constant 1/2 matrix is optimal
  EXPECT_NEAR(tight.upper_center, 15 * std::log(2.0) / 36, 1e-9);
  EXPECT_FALSE(tight.lower);
  EXPECT_NEAR(tight.slack_terms.at("finite_n_gamma"), 0.01, 1e-15);
}

}  // namespace
}  // namespace fhist
