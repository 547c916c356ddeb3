#include "fhist/bigint.hpp"
#include "fhist/counting.hpp"
#include "fhist/error.hpp"
#include "fhist/graph.hpp"
#include "fhist/pattern.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <functional>

namespace fhist {
namespace {

using testing::naive_automorphisms;
using testing::naive_injections;
using testing::random_graph;
using testing::Rng;

Graph bowtie_graph() { return named_pattern("bowtie").graph; }

std::vector<std::uint64_t> naive_rooted(const Graph& g, const Graph& h, int root) {
  std::vector<std::uint64_t> out(g.order(), 0);
  for (int v = 0; v < g.order(); ++v) {
    // pin the root by relabeling: count injections with root -> v
    std::uint64_t c = 0;
    const int n = g.order(), r = h.order();
    std::vector<int> img(r, -1);
    std::vector<bool> used(n, false);
    img[root] = v;
    used[v] = true;
    std::function<void(int)> go = [&](int i) {
      if (i == r) {
        ++c;
        return;
      }
      if (i == root) return go(i + 1);
      for (int x = 0; x < n; ++x) {
        if (used[x]) continue;
        bool ok = true;
        for (int j = 0; j < r && ok; ++j)
          if (img[j] >= 0 && h.adjacent(i, j) && !g.adjacent(x, img[j])) ok = false;
        if (!ok) continue;
        used[x] = true;
        img[i] = x;
        go(i + 1);
        img[i] = -1;
        used[x] = false;
      }
    };
    go(0);
    out[v] = c / naive_automorphisms(h, root);
  }
  return out;
}

TEST(Automorphisms, SmallGraphs) {
  EXPECT_EQ(automorphism_count(Graph::complete(2)), 2u);
  EXPECT_EQ(automorphism_count(Graph::complete(3)), 6u);
  EXPECT_EQ(automorphism_count(Graph::path(3)), 2u);
  EXPECT_EQ(automorphism_count(bowtie_graph()), 8u);
  EXPECT_EQ(automorphism_count(bowtie_graph(), 0), 8u);
  EXPECT_EQ(automorphism_count(bowtie_graph(), 1), 2u);
}

TEST(Automorphisms, MatchesPermutationScan) {
  Rng rng(3);
  for (int t = 0; t < 150; ++t) {
    const int r = 1 + t % 7;
    const Graph h = random_graph(r, 0.5, rng);
    EXPECT_EQ(automorphism_count(h), naive_automorphisms(h));
    EXPECT_EQ(automorphism_count(h, 0), naive_automorphisms(h, 0));
  }
}

TEST(Automorphisms, CapIsEnforced) {
  EXPECT_THROW(automorphism_count(Graph(13)), CapExceeded);
  EXPECT_THROW(RootedPattern::make(Graph::path(9), 0), CapExceeded);
}

TEST(Pattern, DivisibilityInvariants) {
  Rng rng(5);
  for (int t = 0; t < 60; ++t) {
    const int r = 1 + t % 6;
    auto f = RootedPattern::make(random_graph(r, 0.6, rng), t % r);
    EXPECT_EQ(to_double(factorial(r)) / f.aut_count, std::floor(to_double(factorial(r)) / f.aut_count));
    EXPECT_EQ(f.aut_count % f.root_aut_count, 0u);
  }
}

TEST(Merge, ExamplesFromTheDefinition) {
  auto star = merge_at_root(named_pattern("edge"), 3);
  EXPECT_EQ(star.order(), 4);
  EXPECT_EQ(star.root, 0);
  EXPECT_EQ(star.graph.degree(0), 3);
  EXPECT_EQ(star.graph.edge_count(), 3u);

  auto bow = merge_at_root(named_pattern("triangle"), 2);
  EXPECT_EQ(bow.order(), 5);
  EXPECT_EQ(bow.aut_count, 8u);
  EXPECT_EQ(bow.graph.degree(bow.root), 4);

  for (const char* name : {"edge", "triangle", "path3", "star3"}) {
    auto f = named_pattern(name);
    auto same = merge_at_root(f, 1);
    EXPECT_EQ(same.graph, f.graph) << name;
    EXPECT_EQ(same.aut_count, f.aut_count);
  }
}

TEST(Merge, LargeStarsAndBowties) {
  auto star = merge_at_root(named_pattern("edge"), 15);
  EXPECT_EQ(star.aut_count, static_cast<std::uint64_t>(to_double(factorial(15))));
  EXPECT_EQ(star.root_aut_count, star.aut_count);
  auto bows = merge_at_root(named_pattern("triangle"), 7);
  EXPECT_EQ(bows.aut_count, 5040u * 128u);
}

TEST(Merge, VertexCountAndCap) {
  auto f = named_pattern("triangle");
  for (int m = 1; m <= 7; ++m) EXPECT_EQ(merge_at_root(f, m).order(), 1 + 2 * m);
  EXPECT_THROW(merge_at_root(f, 8), CapExceeded);
}

TEST(RootedCopies, Examples) {
  Rng rng(1);
  const Graph g = random_graph(12, 0.4, rng);
  auto deg = rooted_copy_counts(g, named_pattern("edge"));
  for (int v = 0; v < g.order(); ++v) EXPECT_EQ(deg.raw_degrees[v], static_cast<std::uint64_t>(g.degree(v)));

  auto tri = rooted_copy_counts(Graph::complete(4), named_pattern("triangle"));
  EXPECT_EQ(tri.raw_degrees, (std::vector<std::uint64_t>{3, 3, 3, 3}));
  EXPECT_EQ(tri.b_max, 3);

  auto path = rooted_copy_counts(Graph::complete(3), named_pattern("path3"));
  EXPECT_EQ(path.raw_degrees, (std::vector<std::uint64_t>{2, 2, 2}));
}

TEST(RootedCopies, AgreesWithPinnedBacktracking) {
  Rng rng(11);
  const char* names[] = {"edge", "triangle", "path3", "star3", "k4", "bowtie"};
  for (int t = 0; t < 60; ++t) {
    auto f = named_pattern(names[t % 6]);
    const Graph g = random_graph(6 + t % 4, 0.55, rng);
    auto got = rooted_copy_counts(g, f);
    EXPECT_EQ(got.raw_degrees, naive_rooted(g, f.graph, f.root)) << f.name;
    for (auto x : got.raw_degrees) EXPECT_LE(BigInt(x), got.b_max);
  }
}

TEST(RootedCopies, TriangleSumIsThreeTimesTriangles) {
  Rng rng(17);
  auto f = named_pattern("triangle");
  for (int t = 0; t < 500; ++t) {
    const int n = 3 + static_cast<int>(rng() % 28);
    const Graph g = random_graph(n, std::uniform_real_distribution<double>(0.05, 0.95)(rng), rng);
    auto deg = rooted_copy_counts(g, f);
    std::uint64_t sum = 0;
    for (auto x : deg.raw_degrees) sum += x;
    ASSERT_EQ(sum, 3 * testing::naive_triangles(g));
  }
}

TEST(FDegree, PointMasses) {
  auto k4 = f_degree_distribution(Graph::complete(4), named_pattern("triangle"));
  EXPECT_EQ(k4.atoms(), std::vector<double>(4, 1.0));
  auto empty = f_degree_distribution(Graph(6), named_pattern("triangle"));
  EXPECT_EQ(empty.atoms(), std::vector<double>(6, 0.0));
  auto c5 = f_degree_distribution(Graph::cycle(5), named_pattern("edge"));
  EXPECT_EQ(c5.atoms(), std::vector<double>(5, 0.5));
}

TEST(FDegree, MassAndRange) {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    auto p = f_degree_distribution(random_graph(5 + t % 20, 0.5, rng), named_pattern(t % 2 ? "edge" : "path3"));
    EXPECT_NEAR(p.cdf(1.0), 1.0, 1e-12);
    for (double a : p.atoms()) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
  }
}

TEST(Extremal, ClosedForms) {
  auto tri = named_pattern("triangle");
  for (long long n = 3; n < 40; ++n) EXPECT_EQ(extremal_counts(tri, n).b_max, binomial(n - 1, 2));
  for (long long n = 2; n < 40; ++n) EXPECT_EQ(extremal_counts(named_pattern("edge"), n).c_complete, binomial(n, 2));
  EXPECT_EQ(extremal_counts(tri, 4).c_complete, 4);
  EXPECT_EQ(complete_copy_count(bowtie_graph(), 7), binomial(7, 5) * 120 / 8);
}

TEST(Density, Examples) {
  EXPECT_EQ(subgraph_density(Graph::complete(7), Graph::complete(3)), 1.0);
  EXPECT_EQ(subgraph_density(Graph::cycle(5), Graph::complete(3)), 0.0);
  Graph k4e = Graph::complete(4);
  k4e.remove_edge(0, 1);
  EXPECT_EQ(subgraph_density_exact(k4e, Graph::complete(3)), Rational(1, 2));
}

TEST(Density, CompleteGraphIsOne) {
  Rng rng(29);
  for (int r = 1; r <= 6; ++r)
    for (int n = r; n <= 9; ++n) {
      const Graph h = random_graph(r, 0.5, rng);
      EXPECT_EQ(subgraph_density_exact(Graph::complete(n), h), Rational(1)) << r << " " << n;
    }
}

TEST(Density, MatchesInjectionRatio) {
  Rng rng(31);
  for (int t = 0; t < 80; ++t) {
    const Graph g = random_graph(7, 0.6, rng);
    const Graph h = random_graph(2 + t % 4, 0.6, rng);
    const Rational want(BigInt(naive_injections(g, h)), falling_factorial(7, h.order()));
    EXPECT_EQ(subgraph_density_exact(g, h), want);
  }
}

TEST(Density, MonotoneUnderEdgeAddition) {
  Rng rng(37);
  const char* names[] = {"triangle", "path3", "star3", "bowtie"};
  for (int t = 0; t < 500; ++t) {
    Graph g = random_graph(9, 0.4, rng);
    const Graph& h = named_pattern(names[t % 4]).graph;
    const Rational before = subgraph_density_exact(g, h);
    const int u = static_cast<int>(rng() % 9), v = static_cast<int>(rng() % 9);
    if (u == v) continue;
    g.add_edge(u, v);
    const Rational after = subgraph_density_exact(g, h);
    ASSERT_GE(after, before);
    ASSERT_LE(after, 1);
  }
}

TEST(MergedDensities, MatchBruteForce) {
  Rng rng(41);
  const char* names[] = {"edge", "triangle", "path3"};
  for (int t = 0; t < 24; ++t) {
    auto f = named_pattern(names[t % 3]);
    const int n = 8;
    const Graph g = random_graph(n, 0.6, rng);
    const int d = f.order() == 2 ? 4 : 3;
    auto got = merged_densities_exact(g, f, d);
    auto walk = disjoint_copy_tuples(g, f, d, TupleMethod::kWalk);
    auto fast = disjoint_copy_tuples(g, f, d, TupleMethod::kAuto);
    EXPECT_EQ(walk, fast);
    for (int m = 1; m <= d; ++m) {
      const Graph& fm = merge_at_root(f, m).graph;
      if (fm.order() > n) continue;
      const Rational want(BigInt(naive_injections(g, fm)), falling_factorial(n, fm.order()));
      EXPECT_EQ(got[m - 1], want) << f.name << " m=" << m;
    }
  }
}

}  // namespace
}  // namespace fhist
