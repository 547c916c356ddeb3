#pragma once

#include "fhist/bigint.hpp"
#include "fhist/graph.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fhist {

// Ordered-pair edge count #{(a, b) in A x B : a ~ b}; for A = B this is
// twice the number of edges inside A.
std::int64_t edge_count_between(const Graph& g, const VertexSet& a, const VertexSet& b);

// e(A,B) / (|A||B|) for disjoint nonempty A, B.
Rational pair_density_exact(const Graph& g, const VertexSet& a, const VertexSet& b);
double pair_density(const Graph& g, const VertexSet& a, const VertexSet& b);

// Part 0 is the exceptional set C_0; parts 1..k carry the structure.
struct Partition {
  std::vector<int> assignment;
  int k = 0;

  static Partition from_assignment(std::vector<int> assignment);
  // k contiguous blocks of floor(n / k) vertices; the remainder goes to C_0.
  static Partition equitable(int n, int k);

  int order() const { return static_cast<int>(assignment.size()); }
  std::vector<VertexSet> parts() const;  // index 0 is C_0
  std::vector<int> sizes() const;        // index 0 is |C_0|
  bool equal_sized() const;
};

struct SzemerediType {
  int k = 0;
  double eps = 0.0;
  Eigen::MatrixXd S;  // symmetric, entries in [0,1], diagonal unused

  static SzemerediType make(Eigen::MatrixXd s, double eps);
};

enum class UniformityMode { kExact, kHeuristic, kAuto };

inline constexpr int kExactUniformityCap = 14;

struct UniformityOptions {
  UniformityMode mode = UniformityMode::kAuto;
  int trials = 2000;  // random subset pairs in heuristic mode
  std::uint64_t seed = 1;
};

struct UniformityWitness {
  VertexSet a, b;
  double density = 0.0;       // d(A', B')
  double pair_density = 0.0;  // d(A, B)
};

struct UniformityVerdict {
  bool uniform = true;
  std::optional<UniformityWitness> witness;
  UniformityMode mode = UniformityMode::kExact;  // mode actually used
};

// True when (A', B') with these sizes and edge counts witnesses that the pair
// is not eps-uniform: |A'| >= eps|A|, |B'| >= eps|B| and the densities differ
// by at least eps. Shared by every uniformity path so that verdicts agree.
bool witnesses_irregularity(std::int64_t e_sub, std::int64_t a_sub, std::int64_t b_sub,
                            std::int64_t e_full, std::int64_t a_full, std::int64_t b_full, double eps);

UniformityVerdict uniformity_check(const Graph& g, const VertexSet& a, const VertexSet& b, double eps,
                                   const UniformityOptions& opts = {});

// Sum over ordered pairs (i, j) of parts 1..k of |C_i||C_j| / n^2 d(C_i, C_j)^2,
// including i = j.
Rational partition_energy_exact(const Graph& g, const Partition& p);
double partition_energy(const Graph& g, const Partition& p);

struct RefineResult {
  Partition refined;
  double gain = 0.0;
  int irregular_pairs = 0;          // unordered pairs i < j
  double irregular_weight = 0.0;    // sum over ordered irregular pairs of |C_i||C_j| / n^2
  bool all_exact = true;            // every verdict came from an exhaustive scan
};

// Splits every part by the witness subsets of its irregular pairs (Venn
// refinement). C_0 is left alone.
RefineResult refine_step(const Graph& g, const Partition& p, double eps, const UniformityOptions& opts = {});

struct DecomposeOptions {
  int initial_parts = 0;  // 0 means ceil(1 / eps)
  int k_cap = 64;
  int max_iterations = 64;
  UniformityOptions uniformity;
};

struct DecomposeResult {
  Partition partition;  // equal-sized parts plus C_0
  SzemerediType type;
  bool uniform = false;        // refinement loop reached an eps-uniform partition
  bool k_cap_exceeded = false;
  int iterations = 0;
  std::vector<double> energies;   // energy before each refinement and at the end
  double audit_irregular_weight = 0.0;  // after equalizing
  int audit_irregular_pairs = 0;
  std::string note;
};

DecomposeResult regular_decompose(const Graph& g, double eps, const DecomposeOptions& opts = {});

// S with s_ij = d(C_i, C_j) off the diagonal.
Eigen::MatrixXd extract_type_matrix(const Graph& g, const Partition& p);

struct MembershipResult {
  bool member = false;
  std::optional<Partition> certificate;  // parts relabelled to match S
  double max_gap = 1.0;                  // best max_ij |d(C_i, C_j) - s_ij| seen
  double tolerance = 0.0;
  std::string note;
};

struct MembershipOptions {
  std::optional<Partition> candidate;
  int restarts = 8;
  double tolerance = -1.0;  // negative means 1 / g^2
  UniformityOptions uniformity;
};

// Searches for a (k, eps)-uniform partition whose densities match S.
// A negative answer only means no certificate was found.
MembershipResult type_membership(const Graph& g, const SzemerediType& s, const MembershipOptions& opts = {});

}  // namespace fhist
