#pragma once

// Generators and naive reference implementations shared by the test binaries.
// Nothing here calls the library's counting or scanning code.

#include "fhist/distribution.hpp"
#include "fhist/graph.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace fhist::testing {

using Rng = std::mt19937_64;

inline Graph random_graph(int n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) g.add_edge(i, j);
  return g;
}

inline Eigen::MatrixXd random_type(int k, Rng& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) s(i, j) = s(j, i) = u(rng);
  return s;
}

inline Eigen::MatrixXd constant_type(int k, double v) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(k, k, v);
  s.diagonal().setZero();
  return s;
}

// Piecewise density with 1..5 random bins, or 1..8 random atoms.
inline Distribution random_distribution(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (std::bernoulli_distribution(0.5)(rng)) {
    const int bins = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<double> cuts{0.0, 1.0};
    for (int i = 1; i < bins; ++i) cuts.push_back(u(rng));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> w(cuts.size() - 1);
    double mass = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = 0.05 + u(rng);
      mass += w[i] * (cuts[i + 1] - cuts[i]);
    }
    for (double& x : w) x /= mass;
    return Distribution::piecewise(cuts, w);
  }
  const int atoms = std::uniform_int_distribution<int>(1, 8)(rng);
  std::vector<double> a(atoms);
  for (double& x : a) x = std::round(u(rng) * 20.0) / 20.0;
  return Distribution::empirical(a);
}

// Brute-force injection count of h into g by trying every ordered tuple.
inline std::uint64_t naive_injections(const Graph& g, const Graph& h) {
  const int n = g.order(), r = h.order();
  std::vector<int> pick(r, 0);
  std::uint64_t total = 0;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // iterate r-permutations of n via next_permutation over combinations
  std::vector<bool> sel(n, false);
  std::fill(sel.begin(), sel.begin() + std::min(r, n), true);
  if (r > n) return 0;
  do {
    std::vector<int> chosen;
    for (int i = 0; i < n; ++i)
      if (sel[i]) chosen.push_back(i);
    do {
      bool ok = true;
      for (int a = 0; a < r && ok; ++a)
        for (int b = a + 1; b < r && ok; ++b)
          if (h.adjacent(a, b) && !g.adjacent(chosen[a], chosen[b])) ok = false;
      total += ok;
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  } while (std::prev_permutation(sel.begin(), sel.end()));
  return total;
}

inline std::uint64_t naive_automorphisms(const Graph& h, int fixed = -1) {
  const int r = h.order();
  std::vector<int> p(r);
  std::iota(p.begin(), p.end(), 0);
  std::uint64_t c = 0;
  do {
    if (fixed >= 0 && p[fixed] != fixed) continue;
    bool ok = true;
    for (int a = 0; a < r && ok; ++a)
      for (int b = a + 1; b < r && ok; ++b) ok = h.adjacent(a, b) == h.adjacent(p[a], p[b]);
    c += ok;
  } while (std::next_permutation(p.begin(), p.end()));
  return c;
}

inline std::uint64_t naive_triangles(const Graph& g) {
  std::uint64_t t = 0;
  for (int a = 0; a < g.order(); ++a)
    for (int b = a + 1; b < g.order(); ++b)
      if (g.adjacent(a, b))
        for (int c = b + 1; c < g.order(); ++c) t += g.adjacent(a, c) && g.adjacent(b, c);
  return t;
}

// Definitional double-subset scan: every A' of A and B' of B with the size
// thresholds, compared exactly with eps = num / den.
inline bool naive_uniform(const Graph& g, const std::vector<int>& a, const std::vector<int>& b, long num,
                          long den) {
  auto edges = [&](std::uint32_t ma, std::uint32_t mb) {
    long e = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if ((ma >> i & 1u) && (mb >> j & 1u)) e += g.adjacent(a[i], b[j]);
    return e;
  };
  const long na = static_cast<long>(a.size()), nb = static_cast<long>(b.size());
  const std::uint32_t all_a = (1u << na) - 1, all_b = (1u << nb) - 1;
  const long e = edges(all_a, all_b);
  for (std::uint32_t ma = 1; ma <= all_a; ++ma) {
    const long sa = std::popcount(ma);
    if (sa * den < num * na) continue;
    for (std::uint32_t mb = 1; mb <= all_b; ++mb) {
      const long sb = std::popcount(mb);
      if (sb * den < num * nb) continue;
      const long gap = std::abs(edges(ma, mb) * na * nb - e * sa * sb);
      if (gap * den >= num * sa * sb * na * nb) return false;
    }
  }
  return true;
}

// Energy straight from the definition: sum over ordered part pairs (i, j)
// of |C_i||C_j| d(C_i, C_j)^2 / n^2, with d counting ordered vertex pairs.
inline double naive_energy(const Graph& g, const std::vector<int>& part, int k) {
  const int n = g.order();
  double q = 0.0;
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) {
      long e = 0, ci = 0, cj = 0;
      for (int u = 0; u < n; ++u) {
        ci += part[u] == i;
        cj += part[u] == j;
        if (part[u] != i) continue;
        for (int v = 0; v < n; ++v) e += part[v] == j && g.adjacent(u, v);
      }
      if (ci == 0 || cj == 0) continue;
      const double d = static_cast<double>(e) / (static_cast<double>(ci) * cj);
      q += static_cast<double>(ci) * cj * d * d / (static_cast<double>(n) * n);
    }
  return q;
}

// Dense-grid CDF evaluation (both one-sided limits at grid points).
inline double grid_ks(const Distribution& p, const Distribution& q, int steps = 20000) {
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double x = static_cast<double>(i) / steps;
    best = std::max({best, std::abs(p.cdf(x) - q.cdf(x)), std::abs(p.cdf_left(x) - q.cdf_left(x))});
  }
  for (const auto* d : {&p, &q})
    for (double x : d->knots())
      best = std::max({best, std::abs(p.cdf(x) - q.cdf(x)), std::abs(p.cdf_left(x) - q.cdf_left(x))});
  return best;
}

inline double h_nats(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

}  // namespace fhist::testing
