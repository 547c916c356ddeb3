#pragma once

#include "fhist/bigint.hpp"
#include "fhist/distribution.hpp"
#include "fhist/graph.hpp"
#include "fhist/pattern.hpp"
#include "fhist/radii.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fhist {

enum class Labeling { kLabeled, kUnlabeled };

inline constexpr int kLabeledScanCap = 8;
inline constexpr int kUnlabeledScanCap = 7;

struct EnumerationScope {
  int n = 0;
  Labeling labeling = Labeling::kLabeled;
  // Edge-bitmask range [shard_begin, shard_end); shard_end = 0 means all masks.
  std::uint64_t shard_begin = 0;
  std::uint64_t shard_end = 0;
};

// Edge bit e of a mask is the e-th pair (i, j), i < j, in lexicographic order.
Graph graph_from_mask(int n, std::uint64_t mask);
std::uint64_t mask_from_graph(const Graph& g);

struct UnlabeledClass {
  std::uint64_t mask;     // smallest mask in the isomorphism class
  std::uint64_t aut;      // |Aut(G)|
};
std::vector<UnlabeledClass> unlabeled_classes(int n);

// Calls visit(mask) for every graph of the scope, in increasing mask order.
void enumerate_graphs(const EnumerationScope& scope, const std::function<void(std::uint64_t)>& visit);
std::uint64_t scope_size(const EnumerationScope& scope);

// Comparisons of KS and densities against their radii accept this much float slack.
inline constexpr double kOracleTolerance = 1e-12;

std::uint64_t exact_hist_count(const Distribution& p, const RootedPattern& f, double delta,
                               const EnumerationScope& scope);
std::uint64_t exact_densities_count(const Eigen::VectorXd& phi, const Eigen::VectorXd& gamma,
                                    const std::vector<Graph>& family, const EnumerationScope& scope);

struct SandwichOptions {
  CopyNormalization norm = CopyNormalization::kRootedInjection;
  std::optional<double> slack;   // default finite_n_slack(c, n)
  double slack_constant = 10.0;
  int max_counterexamples = 20;
};

struct SandwichCounterexample {
  std::uint64_t mask = 0;
  double ks = 0.0;
  Eigen::VectorXd moment_gaps;
  Eigen::VectorXd densities;
};

struct SandwichVerdict {
  int n = 0;
  Eigen::VectorXd phi, gamma, beta;
  double slack = 0.0;
  std::uint64_t graphs = 0;
  std::uint64_t hist = 0;         // graphs with KS <= delta
  std::uint64_t outer = 0;        // graphs inside B(phi, gamma + slack)
  std::uint64_t inner = 0;        // graphs inside B(phi, beta - slack), when checked
  std::uint64_t outer_violations = 0;
  std::uint64_t inner_violations = 0;
  bool outer_holds = true;
  bool inner_checked = false;
  bool inner_holds = true;
  std::string inner_note;
  // Smallest additive slack that would have made the outer inclusion hold.
  double required_slack = 0.0;
  std::vector<SandwichCounterexample> outer_counterexamples, inner_counterexamples;
};

SandwichVerdict sandwich_check(const Distribution& p, const RootedPattern& f, double delta, int d,
                               const EnumerationScope& scope, const SandwichOptions& opts = {});

enum class WithinPart { kAbsent, kFromDiagonal };

inline constexpr int kBlockSampleCap = 5000;

// k blocks of g vertices (block i holds vertices i g .. (i+1) g - 1) with
// independent Bernoulli(s_ij) edges.
Graph block_sample(const Eigen::MatrixXd& s, int g, std::uint64_t seed,
                   WithinPart within = WithinPart::kAbsent);

struct CountingAuditOptions {
  std::uint64_t seed = 1;
  WithinPart within = WithinPart::kAbsent;
  int uniformity_trials = 200;
};

struct CountingAudit {
  double t_type = 0.0;
  double bound = 0.0;          // 5 eps^(1/(r-2))
  double max_deviation = 0.0;
  double mean_deviation = 0.0;
  std::vector<double> deviations;
  bool within_bound = true;
  bool outside_hypothesis = false;  // eps >= r^-3
  int irregular_pairs_seen = 0;     // over all samples
};
CountingAudit counting_lemma_audit(const Eigen::MatrixXd& s, const Graph& f, int g, int trials, double eps,
                                   const CountingAuditOptions& opts = {});

struct ClassSpotCheck {
  std::uint64_t count = 0;
  BigInt predicted;
  bool match = false;
};
// Labeled n-vertex graphs whose cross density between {0..n/2-1} and the
// rest is within 1/(2 g^2) of 1/2, against the binomial count.
ClassSpotCheck type_class_spot_check(int n);

}  // namespace fhist
