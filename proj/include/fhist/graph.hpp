#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fhist {

// Fixed-size set of vertex indices packed into 64-bit words.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int universe)
      : universe_(universe), words_(static_cast<std::size_t>((universe + 63) / 64), 0) {}
  static VertexSet of(int universe, std::span<const int> members);

  int universe() const { return universe_; }
  void insert(int v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void erase(int v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  bool contains(int v) const { return (words_[v >> 6] >> (v & 63)) & 1u; }
  int count() const;
  bool empty() const { return count() == 0; }
  bool intersects(const VertexSet& other) const;
  std::vector<int> members() const;
  std::span<const std::uint64_t> words() const { return words_; }

  VertexSet& operator&=(const VertexSet& o);
  VertexSet& operator|=(const VertexSet& o);
  VertexSet& operator-=(const VertexSet& o);
  bool operator==(const VertexSet&) const = default;

 private:
  int universe_ = 0;
  std::vector<std::uint64_t> words_;
};

// Simple undirected graph with a packed adjacency bit matrix.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  static Graph complete(int n);
  static Graph cycle(int n);
  static Graph path(int n);
  static Graph from_edges(int n, std::span<const std::pair<int, int>> edges);

  int order() const { return n_; }
  int row_words() const { return w_; }
  std::size_t edge_count() const;

  void add_edge(int u, int v);
  void remove_edge(int u, int v);
  bool adjacent(int u, int v) const {
    return (bits_[static_cast<std::size_t>(u) * w_ + (v >> 6)] >> (v & 63)) & 1u;
  }
  int degree(int v) const;
  std::span<const std::uint64_t> row(int v) const {
    return {bits_.data() + static_cast<std::size_t>(v) * w_, static_cast<std::size_t>(w_)};
  }
  // Number of neighbours of v inside s.
  int degree_into(int v, const VertexSet& s) const;
  std::vector<std::pair<int, int>> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  int n_ = 0;
  int w_ = 0;
  std::vector<std::uint64_t> bits_;
};

inline int popcount_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  int c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & b[i]);
  return c;
}

}  // namespace fhist
