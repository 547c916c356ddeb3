#include "fhist/counting.hpp"

#include "fhist/error.hpp"
#include "fhist/parallel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <unordered_map>

namespace fhist {

namespace {

using i128 = __int128;

BigInt from_i128(i128 x) {
  const bool neg = x < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-x) : static_cast<unsigned __int128>(x);
  BigInt out = static_cast<std::uint64_t>(u >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return neg ? BigInt(-out) : out;
}

// Backtracking embedder. H vertices are placed in an order where each new
// vertex has as many already-placed neighbours as possible; candidates are
// the AND of the placed neighbours' rows minus used vertices.
class Injector {
 public:
  Injector(const Graph& g, const Graph& h, int first) : g_(g), h_(h), w_(g.row_words()) {
    const int r = h.order();
    std::vector<char> placed(r, 0);
    order_.push_back(first);
    placed[first] = 1;
    while (static_cast<int>(order_.size()) < r) {
      int best = -1, best_links = -1, best_deg = -1;
      for (int x = 0; x < r; ++x) {
        if (placed[x]) continue;
        int links = 0;
        for (int y : order_) links += h.adjacent(x, y);
        if (links > best_links || (links == best_links && h.degree(x) > best_deg)) {
          best = x;
          best_links = links;
          best_deg = h.degree(x);
        }
      }
      order_.push_back(best);
      placed[best] = 1;
    }
    back_.resize(r);
    for (int d = 0; d < r; ++d) {
      for (int e = 0; e < d; ++e) {
        if (h.adjacent(order_[d], order_[e])) back_[d].push_back(e);
      }
    }
    cand_.assign(static_cast<std::size_t>(r) * w_, 0);
    used_.assign(w_, 0);
    all_.assign(w_, 0);
    for (int v = 0; v < g.order(); ++v) all_[v >> 6] |= std::uint64_t{1} << (v & 63);
    image_.assign(r, -1);
  }

  std::uint64_t count_from(int v) {
    if (h_.order() == 0) return 1;
    place(0, v);
    std::uint64_t c = h_.order() == 1 ? 1 : count(1);
    unplace(0);
    return c;
  }

  // Calls visit(image) for every injection with order[0] -> v; image is
  // indexed by H vertex.
  template <class Visit>
  void visit_from(int v, Visit&& visit) {
    place(0, v);
    if (h_.order() == 1) {
      visit(image_);
    } else {
      walk(1, visit);
    }
    unplace(0);
  }

 private:
  void place(int depth, int v) {
    image_[order_[depth]] = v;
    used_[v >> 6] |= std::uint64_t{1} << (v & 63);
  }
  void unplace(int depth) {
    int v = image_[order_[depth]];
    used_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  }

  std::uint64_t* fill(int depth) {
    std::uint64_t* c = cand_.data() + static_cast<std::size_t>(depth) * w_;
    if (back_[depth].empty()) {
      for (int i = 0; i < w_; ++i) c[i] = all_[i] & ~used_[i];
      return c;
    }
    auto first = g_.row(image_[order_[back_[depth][0]]]);
    for (int i = 0; i < w_; ++i) c[i] = first[i] & ~used_[i];
    for (std::size_t k = 1; k < back_[depth].size(); ++k) {
      auto row = g_.row(image_[order_[back_[depth][k]]]);
      for (int i = 0; i < w_; ++i) c[i] &= row[i];
    }
    return c;
  }

  std::uint64_t count(int depth) {
    std::uint64_t* c = fill(depth);
    const bool last = depth + 1 == h_.order();
    std::uint64_t total = 0;
    for (int i = 0; i < w_; ++i) {
      if (last) {
        total += static_cast<std::uint64_t>(std::popcount(c[i]));
        continue;
      }
      std::uint64_t word = c[i];
      while (word) {
        int v = (i << 6) + std::countr_zero(word);
        word &= word - 1;
        place(depth, v);
        std::uint64_t sub = count(depth + 1);
        unplace(depth);
        if (__builtin_add_overflow(total, sub, &total)) {
          throw CapExceeded("rooted injection count exceeds 64 bits");
        }
      }
    }
    return total;
  }

  template <class Visit>
  void walk(int depth, Visit& visit) {
    std::uint64_t* c = fill(depth);
    for (int i = 0; i < w_; ++i) {
      std::uint64_t word = c[i];
      while (word) {
        int v = (i << 6) + std::countr_zero(word);
        word &= word - 1;
        place(depth, v);
        if (depth + 1 == h_.order()) {
          visit(image_);
        } else {
          walk(depth + 1, visit);
        }
        unplace(depth);
      }
    }
  }

  const Graph& g_;
  const Graph& h_;
  int w_;
  std::vector<int> order_;
  std::vector<std::vector<int>> back_;
  std::vector<std::uint64_t> cand_, used_, all_;
  std::vector<int> image_;
};

int max_degree_vertex(const Graph& h) {
  int best = 0;
  for (int x = 1; x < h.order(); ++x) {
    if (h.degree(x) > h.degree(best)) best = x;
  }
  return best;
}

}  // namespace

std::vector<std::uint64_t> rooted_injection_counts(const Graph& g, const Graph& h, int root) {
  require(root >= 0 && root < h.order(), "root out of range");
  std::vector<std::uint64_t> out(g.order(), 0);
  if (h.order() > g.order()) return out;
  parallel_chunks(g.order(), [&](std::size_t b, std::size_t e, unsigned) {
    Injector inj(g, h, root);
    for (std::size_t v = b; v < e; ++v) out[v] = inj.count_from(static_cast<int>(v));
  });
  return out;
}

BigInt count_injections(const Graph& g, const Graph& h) {
  if (h.order() == 0) return 1;
  BigInt total = 0;
  for (std::uint64_t c : rooted_injection_counts(g, h, max_degree_vertex(h))) total += c;
  return total;
}

BigInt complete_copy_count(const Graph& h, long long n) {
  return falling_factorial(n, h.order()) / automorphism_count(h);
}

ExtremalCounts extremal_counts(const RootedPattern& f, long long n) {
  require(n >= f.order(), "extremal_counts needs n >= r");
  ExtremalCounts out;
  out.b_max = falling_factorial(n - 1, f.order() - 1) / f.root_aut_count;
  out.c_complete = falling_factorial(n, f.order()) / f.aut_count;
  return out;
}

FDegreeVector rooted_copy_counts(const Graph& g, const RootedPattern& f) {
  require(f.order() <= g.order(), "pattern larger than graph");
  FDegreeVector out;
  out.raw_degrees = rooted_injection_counts(g, f.graph, f.root);
  for (auto& c : out.raw_degrees) c /= f.root_aut_count;
  out.b_max = extremal_counts(f, g.order()).b_max;
  return out;
}

Distribution f_degree_distribution(const Graph& g, const RootedPattern& f) {
  auto deg = rooted_copy_counts(g, f);
  const double b = to_double(deg.b_max);
  std::vector<double> atoms;
  atoms.reserve(deg.raw_degrees.size());
  for (auto c : deg.raw_degrees) atoms.push_back(b > 0 ? static_cast<double>(c) / b : 0.0);
  return Distribution::empirical(std::move(atoms));
}

BigInt copy_count(const Graph& g, const Graph& h) {
  return count_injections(g, h) / automorphism_count(h);
}

Rational subgraph_density_exact(const Graph& g, const Graph& h) {
  require(h.order() <= g.order(), "pattern larger than graph");
  return Rational(copy_count(g, h), complete_copy_count(h, g.order()));
}

double subgraph_density(const Graph& g, const Graph& h) {
  return to_double(subgraph_density_exact(g, h));
}

// ---------------------------------------------------------------------------
// Disjoint tuples of rooted copies.
//
// A rooted copy at v is a set c of q = r-1 non-root vertices (one canonical
// injection per root-stabilizer orbit). cnt(T) is the number of copies
// containing the vertex set T, and hit(U), the number of copies meeting U,
// follows by inclusion-exclusion over T subset of U with |T| <= q.

namespace {

struct TupleKey {
  std::array<int, 8> v;
  bool operator==(const TupleKey&) const = default;
};
struct TupleKeyHash {
  std::size_t operator()(const TupleKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : k.v) h = (h ^ static_cast<std::uint32_t>(x)) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

constexpr int kDensePairLimit = 2048;

class CopyTable {
 public:
  CopyTable(int n, int q) : n_(n), q_(q), cnt1_(n, 0) {
    if (q_ >= 2 && n_ <= kDensePairLimit) cnt2_.assign(static_cast<std::size_t>(n) * n, 0);
  }

  int q() const { return q_; }
  std::size_t size() const { return copies_.size() / std::max(q_, 1); }
  const int* copy(std::size_t i) const { return copies_.data() + i * q_; }
  const std::vector<int>& incident(int x) const { return inc_[x]; }

  void reset() {
    for (int x : touched_) {
      cnt1_[x] = 0;
      inc_[x].clear();
    }
    touched_.clear();
    if (!cnt2_.empty()) {
      for (std::size_t c = 0; c < size(); ++c) {
        const int* p = copy(c);
        for (int a = 0; a < q_; ++a)
          for (int b = a + 1; b < q_; ++b) cnt2_[static_cast<std::size_t>(p[a]) * n_ + p[b]] = 0;
      }
    }
    sparse_.clear();
    copies_.clear();
  }

  void add(std::vector<int> c) {
    std::sort(c.begin(), c.end());
    const std::size_t id = size();
    copies_.insert(copies_.end(), c.begin(), c.end());
    if (inc_.empty()) inc_.resize(n_);
    for (int x : c) {
      if (cnt1_[x]++ == 0) touched_.push_back(x);
      inc_[x].push_back(static_cast<int>(id));
    }
    // Every subset of size >= 2 (or >= 3 when pairs are dense).
    const int lo = cnt2_.empty() ? 2 : 3;
    for (unsigned mask = 1; mask < (1u << q_); ++mask) {
      const int k = std::popcount(mask);
      if (k < 2) continue;
      if (k == 2 && !cnt2_.empty()) {
        int a = std::countr_zero(mask), b = 31 - std::countl_zero(mask);
        ++cnt2_[static_cast<std::size_t>(c[a]) * n_ + c[b]];
        continue;
      }
      if (k < lo) continue;
      TupleKey key;
      key.v.fill(-1);
      int j = 0;
      for (int i = 0; i < q_; ++i)
        if (mask >> i & 1u) key.v[j++] = c[i];
      ++sparse_[key];
    }
  }

  // Copies containing the sorted vertex list t.
  long long cnt(const int* t, int k) const {
    if (k == 1) return cnt1_[t[0]];
    if (k == 2 && !cnt2_.empty()) return cnt2_[static_cast<std::size_t>(t[0]) * n_ + t[1]];
    TupleKey key;
    key.v.fill(-1);
    std::copy(t, t + k, key.v.begin());
    auto it = sparse_.find(key);
    return it == sparse_.end() ? 0 : it->second;
  }

  // Copies meeting the sorted, duplicate-free vertex list u.
  long long hit(const std::vector<int>& u) const {
    long long total = 0;
    int buf[8];
    // Choose subsets in increasing index order so each is sorted.
    auto rec = [&](auto& self, int start, int k) -> void {
      if (k > 0) {
        long long c = cnt(buf, k);
        total += (k & 1) ? c : -c;
        if (c == 0) return;  // supersets of an absent set are absent
      }
      if (k == q_) return;
      for (int i = start; i < static_cast<int>(u.size()); ++i) {
        buf[k] = u[i];
        self(self, i + 1, k + 1);
      }
    };
    rec(rec, 0, 0);
    return total;
  }

 private:
  int n_, q_;
  std::vector<int> copies_;
  std::vector<int> cnt1_;
  std::vector<int> cnt2_;
  std::vector<std::vector<int>> inc_;
  std::vector<int> touched_;
  std::unordered_map<TupleKey, int, TupleKeyHash> sparse_;
};

std::vector<int> merge_sorted(const int* a, int na, const int* b, int nb) {
  std::vector<int> out;
  out.reserve(na + nb);
  std::merge(a, a + na, b, b + nb, std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// N_1..N_3 by inclusion-exclusion.
void closed_form_tuples(const CopyTable& t, int d, std::vector<i128>& out, std::vector<int>& stamp,
                        int& epoch) {
  const std::size_t L = t.size();
  const int q = t.q();
  out[0] = static_cast<i128>(L);
  if (d < 2) return;
  std::vector<long long> h(L);
  i128 h2 = 0;
  for (std::size_t c = 0; c < L; ++c) {
    std::vector<int> u(t.copy(c), t.copy(c) + q);
    h[c] = t.hit(u);
    h2 += h[c];
  }
  out[1] = static_cast<i128>(L) * L - h2;
  if (d < 3) return;
  i128 n3 = 0;
  for (std::size_t c1 = 0; c1 < L; ++c1) {
    const i128 free = static_cast<i128>(L) - h[c1];
    i128 acc = free * free - h2 - static_cast<i128>(h[c1]) * h[c1];
    ++epoch;
    const int* p1 = t.copy(c1);
    for (int a = 0; a < q; ++a) {
      for (int c : t.incident(p1[a])) {
        if (stamp[c] == epoch) continue;
        stamp[c] = epoch;
        acc += h[c] + t.hit(merge_sorted(p1, q, t.copy(c), q));
      }
    }
    n3 += acc;
  }
  out[2] = n3;
}

// Any d, by walking chains of pairwise disjoint copies.
void walk_tuples(const CopyTable& t, int d, std::vector<i128>& out) {
  const std::size_t L = t.size();
  const int q = t.q();
  std::vector<int> uni;
  std::vector<char> in_use;
  auto rec = [&](auto& self, int depth) -> void {
    // depth copies chosen; their union is `uni`.
    std::vector<int> sorted = uni;
    std::sort(sorted.begin(), sorted.end());
    out[depth] += static_cast<i128>(L) - t.hit(sorted);
    if (depth + 1 >= d) return;
    for (std::size_t c = 0; c < L; ++c) {
      const int* p = t.copy(c);
      bool clash = false;
      for (int a = 0; a < q && !clash; ++a) clash = std::binary_search(sorted.begin(), sorted.end(), p[a]);
      if (clash) continue;
      uni.insert(uni.end(), p, p + q);
      self(self, depth + 1);
      uni.resize(uni.size() - q);
    }
  };
  rec(rec, 0);
}

}  // namespace

std::vector<std::vector<BigInt>> disjoint_copy_tuples(const Graph& g, const RootedPattern& f, int d,
                                                      TupleMethod method) {
  require(d >= 1, "d must be >= 1");
  const int n = g.order();
  const int r = f.order();
  const int q = r - 1;
  std::vector<std::vector<BigInt>> result(n, std::vector<BigInt>(d, 0));
  if (r > n) return result;
  if (q == 0) {
    for (auto& row : result) std::fill(row.begin(), row.end(), BigInt(1));
    return result;
  }
  auto stab = root_stabilizer(f.graph, f.root);
  parallel_chunks(n, [&](std::size_t b, std::size_t e, unsigned) {
    Injector inj(g, f.graph, f.root);
    CopyTable table(n, q);
    std::vector<int> stamp;
    int epoch = 0;
    std::vector<i128> tuples(d);
    for (std::size_t v = b; v < e; ++v) {
      table.reset();
      inj.visit_from(static_cast<int>(v), [&](const std::vector<int>& image) {
        // Keep the lexicographically smallest image in its stabilizer orbit.
        for (const auto& s : stab) {
          for (int x = 0; x < r; ++x) {
            const int a = image[x], c = image[s[x]];
            if (c < a) return;
            if (c > a) break;
          }
        }
        std::vector<int> c;
        c.reserve(q);
        for (int x = 0; x < r; ++x)
          if (x != f.root) c.push_back(image[x]);
        table.add(std::move(c));
      });
      std::fill(tuples.begin(), tuples.end(), 0);
      if (d <= 3 && method == TupleMethod::kAuto) {
        if (stamp.size() < table.size()) stamp.assign(table.size(), 0), epoch = 0;
        closed_form_tuples(table, d, tuples, stamp, epoch);
      } else {
        walk_tuples(table, d, tuples);
      }
      for (int m = 0; m < d; ++m) result[v][m] = from_i128(tuples[m]);
    }
  });
  return result;
}

std::vector<Rational> merged_densities_exact(const Graph& g, const RootedPattern& f, int d) {
  const long long n = g.order();
  const int q = f.order() - 1;
  require(1 + static_cast<long long>(d) * q <= n, "F^d has more vertices than the graph");
  auto tuples = disjoint_copy_tuples(g, f, d);
  std::vector<Rational> out;
  BigInt ra_pow = 1;
  for (int m = 1; m <= d; ++m) {
    ra_pow *= f.root_aut_count;
    BigInt inj = 0;
    for (const auto& row : tuples) inj += row[m - 1];
    inj *= ra_pow;
    out.emplace_back(inj, falling_factorial(n, 1 + static_cast<long long>(m) * q));
  }
  return out;
}

std::vector<double> merged_densities(const Graph& g, const RootedPattern& f, int d) {
  std::vector<double> out;
  for (const auto& x : merged_densities_exact(g, f, d)) out.push_back(to_double(x));
  return out;
}

}  // namespace fhist
