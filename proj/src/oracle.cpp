#include "fhist/oracle.hpp"

#include "fhist/counting.hpp"
#include "fhist/error.hpp"
#include "fhist/mean_density.hpp"
#include "fhist/parallel.hpp"
#include "fhist/szemeredi.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

namespace fhist {

namespace {

int pair_count(int n) { return n * (n - 1) / 2; }

// Edge index of (i, j), i < j, in lexicographic pair order.
int edge_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Adjacency rows of a small graph held as bitmasks.
struct SmallGraph {
  int n = 0;
  std::array<std::uint32_t, kLabeledScanCap> row{};

  static SmallGraph from_mask(int n, std::uint64_t mask) {
    SmallGraph g;
    g.n = n;
    int e = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++e)
        if (mask >> e & 1u) {
          g.row[i] |= 1u << j;
          g.row[j] |= 1u << i;
        }
    return g;
  }
};

// Injection counting of a fixed pattern into small graphs.
class SmallEmbedder {
 public:
  SmallEmbedder(const Graph& h, int first) {
    const int r = h.order();
    std::vector<char> placed(r, 0);
    order_.push_back(first);
    placed[first] = 1;
    while (static_cast<int>(order_.size()) < r) {
      int best = -1, links = -1;
      for (int x = 0; x < r; ++x) {
        if (placed[x]) continue;
        int l = 0;
        for (int y : order_) l += h.adjacent(x, y);
        if (l > links) best = x, links = l;
      }
      order_.push_back(best);
      placed[best] = 1;
    }
    back_.resize(r);
    for (int d = 0; d < r; ++d)
      for (int e = 0; e < d; ++e)
        if (h.adjacent(order_[d], order_[e])) back_[d].push_back(e);
  }

  std::uint64_t count_from(const SmallGraph& g, int v) const {
    std::array<int, 16> img{};
    img[0] = v;
    if (order_.size() == 1) return 1;
    return rec(g, 1, 1u << v, img);
  }

  std::uint64_t count_all(const SmallGraph& g) const {
    std::uint64_t t = 0;
    for (int v = 0; v < g.n; ++v) t += count_from(g, v);
    return t;
  }

 private:
  std::uint64_t rec(const SmallGraph& g, int depth, std::uint32_t used, std::array<int, 16>& img) const {
    std::uint32_t cand = (1u << g.n) - 1;
    for (int e : back_[depth]) cand &= g.row[img[e]];
    cand &= ~used;
    if (depth + 1 == static_cast<int>(order_.size())) return std::popcount(cand);
    std::uint64_t total = 0;
    while (cand) {
      const int v = std::countr_zero(cand);
      cand &= cand - 1;
      img[depth] = v;
      total += rec(g, depth + 1, used | (1u << v), img);
    }
    return total;
  }

  std::vector<int> order_;
  std::vector<std::vector<int>> back_;
};

void check_scope(const EnumerationScope& s) {
  require(s.n >= 1, "scope needs n >= 1");
  if (s.labeling == Labeling::kLabeled && s.n > kLabeledScanCap) {
    throw CapExceeded("labeled scans are limited to n <= 8");
  }
  if (s.labeling == Labeling::kUnlabeled && s.n > kUnlabeledScanCap) {
    throw CapExceeded("unlabeled scans are limited to n <= 7");
  }
}

std::uint64_t full_range(int n) { return std::uint64_t{1} << pair_count(n); }

// Visits masks of the scope in per-worker contiguous blocks.
template <class Body>
void scan(const EnumerationScope& scope, Body&& body) {
  check_scope(scope);
  const std::uint64_t end = scope.shard_end ? std::min(scope.shard_end, full_range(scope.n)) : full_range(scope.n);
  const std::uint64_t begin = std::min(scope.shard_begin, end);
  if (scope.labeling == Labeling::kLabeled) {
    parallel_chunks(end - begin, [&](std::size_t b, std::size_t e, unsigned w) {
      for (std::size_t i = b; i < e; ++i) body(begin + i, w);
    });
    return;
  }
  auto classes = unlabeled_classes(scope.n);
  std::vector<std::uint64_t> masks;
  for (const auto& c : classes)
    if (c.mask >= begin && c.mask < end) masks.push_back(c.mask);
  parallel_chunks(masks.size(), [&](std::size_t b, std::size_t e, unsigned w) {
    for (std::size_t i = b; i < e; ++i) body(masks[i], w);
  });
}

}  // namespace

Graph graph_from_mask(int n, std::uint64_t mask) {
  Graph g(n);
  int e = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++e)
      if (mask >> e & 1u) g.add_edge(i, j);
  return g;
}

std::uint64_t mask_from_graph(const Graph& g) {
  require(g.order() <= 11, "graph too large for an edge bitmask");
  std::uint64_t m = 0;
  for (auto [u, v] : g.edges()) m |= std::uint64_t{1} << edge_index(u, v, g.order());
  return m;
}

std::vector<UnlabeledClass> unlabeled_classes(int n) {
  require(n >= 1, "n must be >= 1");
  if (n > kUnlabeledScanCap) throw CapExceeded("unlabeled enumeration is limited to n <= 7");
  const int pairs = pair_count(n);
  // Edge-index image of every pair under every permutation.
  std::vector<std::vector<int>> maps;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> m(pairs);
    int e = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++e) m[e] = edge_index(perm[i], perm[j], n);
    maps.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));
  const std::uint64_t total = full_range(n);
  std::vector<std::uint64_t> seen((total + 63) / 64, 0);
  std::vector<UnlabeledClass> out;
  std::vector<std::uint64_t> orbit;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (seen[mask >> 6] >> (mask & 63) & 1u) continue;
    orbit.clear();
    for (const auto& m : maps) {
      std::uint64_t img = 0;
      for (std::uint64_t rest = mask; rest; rest &= rest - 1) img |= std::uint64_t{1} << m[std::countr_zero(rest)];
      if (!(seen[img >> 6] >> (img & 63) & 1u)) {
        seen[img >> 6] |= std::uint64_t{1} << (img & 63);
        orbit.push_back(img);
      }
    }
    out.push_back({mask, maps.size() / orbit.size()});
  }
  return out;
}

void enumerate_graphs(const EnumerationScope& scope, const std::function<void(std::uint64_t)>& visit) {
  check_scope(scope);
  const std::uint64_t end = scope.shard_end ? std::min(scope.shard_end, full_range(scope.n)) : full_range(scope.n);
  const std::uint64_t begin = std::min(scope.shard_begin, end);
  if (scope.labeling == Labeling::kLabeled) {
    for (std::uint64_t m = begin; m < end; ++m) visit(m);
    return;
  }
  for (const auto& c : unlabeled_classes(scope.n))
    if (c.mask >= begin && c.mask < end) visit(c.mask);
}

std::uint64_t scope_size(const EnumerationScope& scope) {
  std::uint64_t c = 0;
  if (scope.labeling == Labeling::kLabeled) {
    check_scope(scope);
    const std::uint64_t end = scope.shard_end ? std::min(scope.shard_end, full_range(scope.n)) : full_range(scope.n);
    return end - std::min(scope.shard_begin, end);
  }
  enumerate_graphs(scope, [&](std::uint64_t) { ++c; });
  return c;
}

namespace {

// F-degree distribution of a small graph.
Distribution small_fdeg(const SmallGraph& g, const SmallEmbedder& emb, const RootedPattern& f, double b_max) {
  std::vector<double> atoms(g.n);
  for (int v = 0; v < g.n; ++v) {
    atoms[v] = static_cast<double>(emb.count_from(g, v) / f.root_aut_count) / b_max;
  }
  return Distribution::empirical(std::move(atoms));
}

}  // namespace

std::uint64_t exact_hist_count(const Distribution& p, const RootedPattern& f, double delta,
                               const EnumerationScope& scope) {
  require(scope.n >= f.order(), "n must be >= r");
  SmallEmbedder emb(f.graph, f.root);
  const double b = to_double(extremal_counts(f, scope.n).b_max);
  std::vector<std::uint64_t> counts(max_threads(), 0);
  scan(scope, [&](std::uint64_t mask, unsigned w) {
    auto g = SmallGraph::from_mask(scope.n, mask);
    if (ks_distance(small_fdeg(g, emb, f, b), p) <= delta + kOracleTolerance) ++counts[w];
  });
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t exact_densities_count(const Eigen::VectorXd& phi, const Eigen::VectorXd& gamma,
                                    const std::vector<Graph>& family, const EnumerationScope& scope) {
  require(phi.size() == static_cast<Eigen::Index>(family.size()) && gamma.size() == phi.size(),
          "phi and gamma need one entry per family member");
  std::vector<SmallEmbedder> emb;
  std::vector<double> denom;
  for (const auto& h : family) {
    require(h.order() <= scope.n, "family member larger than n");
    emb.emplace_back(h, 0);
    denom.push_back(to_double(falling_factorial(scope.n, h.order())));
  }
  std::vector<std::uint64_t> counts(max_threads(), 0);
  scan(scope, [&](std::uint64_t mask, unsigned w) {
    auto g = SmallGraph::from_mask(scope.n, mask);
    for (std::size_t m = 0; m < emb.size(); ++m) {
      const double t = static_cast<double>(emb[m].count_all(g)) / denom[m];
      if (std::abs(t - phi[m]) > gamma[m] + kOracleTolerance) return;
    }
    ++counts[w];
  });
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

SandwichVerdict sandwich_check(const Distribution& p, const RootedPattern& f, double delta, int d,
                               const EnumerationScope& scope, const SandwichOptions& opts) {
  const int n = scope.n;
  require(1 + d * (f.order() - 1) <= n, "F^d has more vertices than n");
  SandwichVerdict v;
  v.n = n;
  const auto rep = phi_vector(p, f, d, opts.norm);
  v.phi = rep.phi;
  v.gamma = gamma_radii(p, f, d, delta, opts.norm);
  v.slack = opts.slack ? *opts.slack : finite_n_slack(rep.c_coeffs, n, opts.slack_constant);
  BetaRadii beta = delta > 0.0 ? beta_radii(p, f, d, delta, opts.norm) : BetaRadii{Eigen::VectorXd::Zero(d)};
  v.beta = beta.beta;
  Eigen::VectorXd inner_radius = v.beta.array() - v.slack;
  if (!beta.feasible) {
    v.inner_note = "inner radii infeasible; inner inclusion vacuous";
  } else if (inner_radius.minCoeff() < 0.0) {
    v.inner_note = "inner radii are smaller than the finite-n slack; inner inclusion vacuous";
  } else {
    v.inner_checked = true;
  }

  SmallEmbedder emb(f.graph, f.root);
  std::vector<SmallEmbedder> fam;
  std::vector<double> denom;
  for (const auto& fm : merged_family(f, d)) {
    fam.emplace_back(fm.graph, fm.root);
    denom.push_back(to_double(falling_factorial(n, fm.order())));
  }
  const double b = to_double(extremal_counts(f, n).b_max);
  const Eigen::VectorXd p_moments = moment_vector(p, d);

  struct Acc {
    std::uint64_t graphs = 0, hist = 0, outer = 0, inner = 0, outer_bad = 0, inner_bad = 0;
    double required = 0.0;
    std::vector<SandwichCounterexample> outer_ce, inner_ce;
  };
  std::vector<Acc> acc(max_threads());
  scan(scope, [&](std::uint64_t mask, unsigned w) {
    Acc& a = acc[w];
    ++a.graphs;
    auto g = SmallGraph::from_mask(n, mask);
    const Distribution q = small_fdeg(g, emb, f, b);
    const double ks = ks_distance(q, p);
    Eigen::VectorXd t(d);
    for (int m = 0; m < d; ++m) t[m] = static_cast<double>(fam[m].count_all(g)) / denom[m];
    const Eigen::VectorXd gap = (t - v.phi).cwiseAbs();
    const bool in_hist = ks <= delta + kOracleTolerance;
    const bool in_outer = ((gap - v.gamma).array() <= v.slack + kOracleTolerance).all();
    const bool in_inner = v.inner_checked && ((gap - inner_radius).array() <= kOracleTolerance).all();
    a.hist += in_hist;
    a.outer += in_outer;
    a.inner += in_inner;
    auto example = [&] {
      return SandwichCounterexample{mask, ks, (moment_vector(q, d) - p_moments).cwiseAbs(), t};
    };
    if (in_hist) {
      a.required = std::max(a.required, (gap - v.gamma).maxCoeff());
      if (!in_outer) {
        ++a.outer_bad;
        if (static_cast<int>(a.outer_ce.size()) < opts.max_counterexamples) a.outer_ce.push_back(example());
      }
    }
    if (in_inner && !in_hist) {
      ++a.inner_bad;
      if (static_cast<int>(a.inner_ce.size()) < opts.max_counterexamples) a.inner_ce.push_back(example());
    }
  });
  for (auto& a : acc) {
    v.graphs += a.graphs;
    v.hist += a.hist;
    v.outer += a.outer;
    v.inner += a.inner;
    v.outer_violations += a.outer_bad;
    v.inner_violations += a.inner_bad;
    v.required_slack = std::max(v.required_slack, a.required);
    for (auto& c : a.outer_ce)
      if (static_cast<int>(v.outer_counterexamples.size()) < opts.max_counterexamples)
        v.outer_counterexamples.push_back(std::move(c));
    for (auto& c : a.inner_ce)
      if (static_cast<int>(v.inner_counterexamples.size()) < opts.max_counterexamples)
        v.inner_counterexamples.push_back(std::move(c));
  }
  v.outer_holds = v.outer_violations == 0;
  v.inner_holds = v.inner_violations == 0;
  return v;
}

// ---------------------------------------------------------------------------

Graph block_sample(const Eigen::MatrixXd& s, int g, std::uint64_t seed, WithinPart within) {
  require(s.rows() == s.cols() && s.rows() >= 1, "type matrix must be square");
  require(g >= 1, "block size must be >= 1");
  const long long n = s.rows() * static_cast<long long>(g);
  if (n > kBlockSampleCap) throw CapExceeded("block sample exceeds the vertex cap");
  Graph out(static_cast<int>(n));
  std::mt19937_64 rng(seed);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const int i = u / g, j = v / g;
      if (i == j && within == WithinPart::kAbsent) continue;
      // 53-bit uniform in [0,1), identical on every platform.
      const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (x < s(i, j)) out.add_edge(u, v);
    }
  }
  return out;
}

CountingAudit counting_lemma_audit(const Eigen::MatrixXd& s, const Graph& f, int g, int trials, double eps,
                                   const CountingAuditOptions& opts) {
  const int r = f.order();
  require(r >= 3, "counting audit needs a pattern on at least 3 vertices");
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0,1]");
  require(trials >= 1, "need at least one trial");
  const int k = static_cast<int>(s.rows());
  CountingAudit a;
  a.t_type = mean_density(s, f);
  a.bound = 5.0 * std::pow(eps, 1.0 / (r - 2));
  a.outside_hypothesis = eps >= 1.0 / (double(r) * r * r);
  Partition blocks = Partition::equitable(k * g, k);
  UniformityOptions uo;
  uo.mode = UniformityMode::kAuto;
  uo.trials = opts.uniformity_trials;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Graph G = block_sample(s, g, opts.seed + static_cast<std::uint64_t>(t), opts.within);
    const double dev = std::abs(subgraph_density(G, f) - a.t_type);
    a.deviations.push_back(dev);
    a.max_deviation = std::max(a.max_deviation, dev);
    sum += dev;
    const auto parts = blocks.parts();
    for (int i = 1; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j) {
        uo.seed = opts.seed + static_cast<std::uint64_t>(t) * 7919u + i * 31u + j;
        if (!uniformity_check(G, parts[i], parts[j], eps, uo).uniform) ++a.irregular_pairs_seen;
      }
  }
  a.mean_deviation = sum / trials;
  a.within_bound = a.max_deviation <= a.bound;
  return a;
}

ClassSpotCheck type_class_spot_check(int n) {
  require(n >= 2 && n % 2 == 0, "spot check needs an even n >= 2");
  if (n > kLabeledScanCap) throw CapExceeded("spot check is limited to n <= 8");
  const int g = n / 2;
  std::uint64_t cross = 0, total = full_range(n);
  for (int i = 0; i < g; ++i)
    for (int j = g; j < n; ++j) cross |= std::uint64_t{1} << edge_index(i, j, n);
  const double g2 = double(g) * g;
  auto close = [&](int e) { return std::abs(e / g2 - 0.5) <= 0.5 / g2 + 1e-15; };
  ClassSpotCheck c;
  for (std::uint64_t mask = 0; mask < total; ++mask) c.count += close(std::popcount(mask & cross));
  c.predicted = 0;
  for (int e = 0; e <= g * g; ++e)
    if (close(e)) c.predicted += binomial(g * g, e);
  c.predicted <<= 2 * pair_count(g);
  c.match = c.predicted == c.count;
  return c;
}

}  // namespace fhist
