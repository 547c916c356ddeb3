#pragma once

#include "fhist/bigint.hpp"
#include "fhist/distribution.hpp"
#include "fhist/graph.hpp"
#include "fhist/pattern.hpp"

#include <cstdint>
#include <vector>

namespace fhist {

// Edge-preserving injections V(H) -> V(G) (non-induced).
BigInt count_injections(const Graph& g, const Graph& h);
// Per vertex v of G, injections sending `root` to v.
std::vector<std::uint64_t> rooted_injection_counts(const Graph& g, const Graph& h, int root);

struct FDegreeVector {
  std::vector<std::uint64_t> raw_degrees;
  BigInt b_max;
};

// Copies of F rooted at each vertex: rooted injections / root_aut_count.
FDegreeVector rooted_copy_counts(const Graph& g, const RootedPattern& f);
// Empirical law of raw_degrees / b_max.
Distribution f_degree_distribution(const Graph& g, const RootedPattern& f);

struct ExtremalCounts {
  BigInt b_max;       // rooted copies at one vertex of K_n
  BigInt c_complete;  // unrooted copies in K_n
};
ExtremalCounts extremal_counts(const RootedPattern& f, long long n);
// Copies of h in K_n: (n)_r / |Aut(h)|.
BigInt complete_copy_count(const Graph& h, long long n);

// Unlabeled non-induced copies of h in g.
BigInt copy_count(const Graph& g, const Graph& h);
Rational subgraph_density_exact(const Graph& g, const Graph& h);
double subgraph_density(const Graph& g, const Graph& h);

// Ordered m-tuples of rooted F-copies at v whose non-root vertex sets are
// pairwise disjoint, for m = 1..d (entry [v][m-1]). Equivalent to rooted
// injections of F^m divided by root_aut_count^m.
// kAuto uses closed forms for d <= 3 and a chain walk beyond.
enum class TupleMethod { kAuto, kWalk };
std::vector<std::vector<BigInt>> disjoint_copy_tuples(const Graph& g, const RootedPattern& f, int d,
                                                      TupleMethod method = TupleMethod::kAuto);

// t(G, F^m) for m = 1..d, without building F^m explicitly.
std::vector<Rational> merged_densities_exact(const Graph& g, const RootedPattern& f, int d);
std::vector<double> merged_densities(const Graph& g, const RootedPattern& f, int d);

}  // namespace fhist
