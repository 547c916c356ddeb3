#include "fhist/pattern.hpp"

#include "fhist/error.hpp"

#include <functional>

namespace fhist {

namespace {

// Backtracking over vertex images; calls visit(perm) for every automorphism.
void search_automorphisms(const Graph& h, std::optional<int> fixed_root,
                          const std::function<void(const std::vector<int>&)>& visit) {
  const int r = h.order();
  std::vector<int> deg(r), image(r, -1);
  std::vector<char> used(r, 0);
  for (int v = 0; v < r; ++v) deg[v] = h.degree(v);

  std::function<void(int)> extend = [&](int i) {
    if (i == r) {
      visit(image);
      return;
    }
    for (int j = 0; j < r; ++j) {
      if (used[j] || deg[j] != deg[i]) continue;
      if (fixed_root && (i == *fixed_root) != (j == *fixed_root)) continue;
      bool ok = true;
      for (int p = 0; p < i && ok; ++p) ok = h.adjacent(i, p) == h.adjacent(j, image[p]);
      if (!ok) continue;
      image[i] = j;
      used[j] = 1;
      extend(i + 1);
      used[j] = 0;
    }
    image[i] = -1;
  };
  extend(0);
}

// Some automorphism fixes every pinned vertex and sends v to j.
bool extends_to_automorphism(const Graph& h, const std::vector<char>& pinned, int v, int j) {
  const int r = h.order();
  if (h.degree(v) != h.degree(j)) return false;
  std::vector<int> seq, image(r, -1);
  std::vector<char> used(r, 0);
  for (int u = 0; u < r; ++u)
    if (pinned[u]) seq.push_back(u), image[u] = u, used[u] = 1;
  const int base = static_cast<int>(seq.size());
  seq.push_back(v);
  for (int u = 0; u < r; ++u)
    if (!pinned[u] && u != v) seq.push_back(u);
  for (int p = 0; p < base; ++p)
    if (h.adjacent(v, seq[p]) != h.adjacent(j, seq[p])) return false;
  image[v] = j;
  used[j] = 1;

  std::function<bool(int)> extend = [&](int i) {
    if (i == r) return true;
    const int u = seq[i];
    for (int x = 0; x < r; ++x) {
      if (used[x] || h.degree(x) != h.degree(u)) continue;
      bool ok = true;
      for (int p = 0; p < i && ok; ++p) ok = h.adjacent(u, seq[p]) == h.adjacent(x, image[seq[p]]);
      if (!ok) continue;
      image[u] = x;
      used[x] = 1;
      if (extend(i + 1)) return true;
      used[x] = 0;
    }
    image[u] = -1;
    return false;
  };
  return extend(base + 1);
}

void check_cap(const Graph& h, int vertex_cap) {
  if (h.order() > vertex_cap)
    throw CapExceeded("automorphism search limited to " + std::to_string(vertex_cap) +
                      " vertices, got " + std::to_string(h.order()));
}

}  // namespace

std::uint64_t automorphism_count(const Graph& h, std::optional<int> fixed_root, int vertex_cap) {
  check_cap(h, vertex_cap);
  if (fixed_root) require(*fixed_root >= 0 && *fixed_root < h.order(), "root out of range");
  // Orbit-stabilizer: pin vertices one at a time and multiply the orbit sizes.
  const int r = h.order();
  std::vector<char> pinned(r, 0);
  if (fixed_root) pinned[*fixed_root] = 1;
  std::uint64_t total = 1;
  for (int v = 0; v < r; ++v) {
    if (pinned[v]) continue;
    std::uint64_t orbit = 0;
    for (int j = 0; j < r; ++j)
      if (!pinned[j] && extends_to_automorphism(h, pinned, v, j)) ++orbit;
    total *= orbit;
    pinned[v] = 1;
  }
  return total;
}

std::vector<std::vector<int>> root_stabilizer(const Graph& h, int root, int vertex_cap) {
  check_cap(h, vertex_cap);
  std::vector<std::vector<int>> out;
  search_automorphisms(h, root, [&](const std::vector<int>& p) { out.push_back(p); });
  return out;
}

RootedPattern RootedPattern::make(Graph g, int root, std::string name, int vertex_cap) {
  require(g.order() >= 1, "pattern needs at least one vertex");
  require(root >= 0 && root < g.order(), "pattern root out of range");
  if (g.order() > vertex_cap)
    throw CapExceeded("pattern has " + std::to_string(g.order()) + " vertices, cap is " +
                      std::to_string(vertex_cap));
  RootedPattern p;
  p.aut_count = automorphism_count(g, std::nullopt, vertex_cap);
  p.root_aut_count = automorphism_count(g, root, vertex_cap);
  p.graph = std::move(g);
  p.root = root;
  p.name = std::move(name);
  return p;
}

RootedPattern merge_at_root(const RootedPattern& f, int m, int vertex_cap) {
  require(m >= 1, "merge_at_root needs m >= 1");
  const int r = f.order();
  const int size = 1 + m * (r - 1);
  if (size > vertex_cap)
    throw CapExceeded("F^" + std::to_string(m) + " has " + std::to_string(size) +
                      " vertices, cap is " + std::to_string(vertex_cap));
  // Relabel F so that its root is 0 and the other vertices follow in order.
  std::vector<int> local(r);
  for (int v = 0, next = 1; v < r; ++v) local[v] = v == f.root ? 0 : next++;

  Graph merged(size);
  for (int b = 0; b < m; ++b) {
    auto place = [&](int v) { return local[v] == 0 ? 0 : 1 + b * (r - 1) + (local[v] - 1); };
    for (auto [u, v] : f.graph.edges()) merged.add_edge(place(u), place(v));
  }
  std::string name = f.name.empty() ? std::string{} : f.name + "^" + std::to_string(m);
  return RootedPattern::make(std::move(merged), 0, std::move(name), vertex_cap);
}

std::vector<RootedPattern> merged_family(const RootedPattern& f, int d, int vertex_cap) {
  require(d >= 1, "family order d must be >= 1");
  std::vector<RootedPattern> family;
  family.reserve(d);
  for (int m = 1; m <= d; ++m) family.push_back(merge_at_root(f, m, vertex_cap));
  return family;
}

RootedPattern named_pattern(const std::string& name) {
  using E = std::pair<int, int>;
  if (name == "edge") return RootedPattern::make(Graph::complete(2), 0, name);
  if (name == "triangle") return RootedPattern::make(Graph::complete(3), 0, name);
  if (name == "k4") return RootedPattern::make(Graph::complete(4), 0, name);
  if (name == "path3") return RootedPattern::make(Graph::path(3), 0, name);
  if (name == "star3") {
    const E e[] = {{0, 1}, {0, 2}, {0, 3}};
    return RootedPattern::make(Graph::from_edges(4, e), 0, name);
  }
  if (name == "bowtie") {
    const E e[] = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}};
    return RootedPattern::make(Graph::from_edges(5, e), 0, name);
  }
  throw ValidationError("unknown pattern '" + name + "'");
}

}  // namespace fhist
