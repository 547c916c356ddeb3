#pragma once

#include "fhist/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fhist {

inline constexpr int kAutomorphismVertexCap = 12;
inline constexpr int kPatternVertexCap = 8;
inline constexpr int kMergedVertexCap = 16;

// |Aut(H)|, or the number of automorphisms fixing `fixed_root` when given.
// Exhaustive permutation search pruned by degree and partial adjacency.
std::uint64_t automorphism_count(const Graph& h, std::optional<int> fixed_root = std::nullopt,
                                 int vertex_cap = kAutomorphismVertexCap);

// All automorphisms of h fixing `root`, as image arrays.
std::vector<std::vector<int>> root_stabilizer(const Graph& h, int root,
                                              int vertex_cap = kAutomorphismVertexCap);

// Small graph with a designated root vertex.
struct RootedPattern {
  Graph graph;
  int root = 0;
  std::uint64_t aut_count = 1;
  std::uint64_t root_aut_count = 1;
  std::string name;

  int order() const { return graph.order(); }
  // Size of the orbit of the root under Aut(F).
  std::uint64_t root_orbit() const { return aut_count / root_aut_count; }

  static RootedPattern make(Graph g, int root, std::string name = {},
                            int vertex_cap = kPatternVertexCap);
};

// F^m: m copies of F glued at their roots. The merged root is vertex 0 and
// blade b occupies vertices 1 + b(r-1) .. (b+1)(r-1).
RootedPattern merge_at_root(const RootedPattern& f, int m, int vertex_cap = kMergedVertexCap);

// The family {F^1, ..., F^d}.
std::vector<RootedPattern> merged_family(const RootedPattern& f, int d,
                                         int vertex_cap = kMergedVertexCap);

// "edge", "triangle", "k4", "path3", "star3", "bowtie"; throws ValidationError otherwise.
RootedPattern named_pattern(const std::string& name);

}  // namespace fhist
