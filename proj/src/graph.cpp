#include "fhist/graph.hpp"

#include "fhist/error.hpp"

#include <string>

namespace fhist {

VertexSet VertexSet::of(int universe, std::span<const int> members) {
  VertexSet s(universe);
  for (int v : members) {
    require(v >= 0 && v < universe, "vertex " + std::to_string(v) + " outside universe");
    s.insert(v);
  }
  return s;
}

int VertexSet::count() const {
  int c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

bool VertexSet::intersects(const VertexSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

std::vector<int> VertexSet::members() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto w = words_[i];
    while (w) {
      out.push_back(static_cast<int>(i * 64 + std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

VertexSet& VertexSet::operator&=(const VertexSet& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}
VertexSet& VertexSet::operator|=(const VertexSet& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}
VertexSet& VertexSet::operator-=(const VertexSet& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

Graph::Graph(int n) : n_(n), w_((n + 63) / 64) {
  require(n >= 0, "negative vertex count");
  bits_.assign(static_cast<std::size_t>(n) * w_, 0);
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph Graph::cycle(int n) {
  Graph g(n);
  for (int u = 0; u < n && n >= 3; ++u) g.add_edge(u, (u + 1) % n);
  return g;
}

Graph Graph::path(int n) {
  Graph g(n);
  for (int u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
  return g;
}

Graph Graph::from_edges(int n, std::span<const std::pair<int, int>> edges) {
  Graph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total / 2;
}

void Graph::add_edge(int u, int v) {
  require(u >= 0 && v >= 0 && u < n_ && v < n_, "edge endpoint out of range");
  require(u != v, "self loops are not allowed");
  bits_[static_cast<std::size_t>(u) * w_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
  bits_[static_cast<std::size_t>(v) * w_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
}

void Graph::remove_edge(int u, int v) {
  bits_[static_cast<std::size_t>(u) * w_ + (v >> 6)] &= ~(std::uint64_t{1} << (v & 63));
  bits_[static_cast<std::size_t>(v) * w_ + (u >> 6)] &= ~(std::uint64_t{1} << (u & 63));
}

int Graph::degree(int v) const {
  int d = 0;
  for (auto w : row(v)) d += std::popcount(w);
  return d;
}

int Graph::degree_into(int v, const VertexSet& s) const { return popcount_and(row(v), s.words()); }

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v)
      if (adjacent(u, v)) out.emplace_back(u, v);
  return out;
}

}  // namespace fhist
