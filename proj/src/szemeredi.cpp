#include "fhist/szemeredi.hpp"

#include "fhist/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace fhist {

std::int64_t edge_count_between(const Graph& g, const VertexSet& a, const VertexSet& b) {
  std::int64_t e = 0;
  for (int v : a.members()) e += g.degree_into(v, b);
  return e;
}

Rational pair_density_exact(const Graph& g, const VertexSet& a, const VertexSet& b) {
  require(!a.empty() && !b.empty(), "pair density needs nonempty sets");
  require(!a.intersects(b), "pair density needs disjoint sets");
  return Rational(edge_count_between(g, a, b), static_cast<std::int64_t>(a.count()) * b.count());
}

double pair_density(const Graph& g, const VertexSet& a, const VertexSet& b) {
  return to_double(pair_density_exact(g, a, b));
}

// ---------------------------------------------------------------------------

Partition Partition::from_assignment(std::vector<int> assignment) {
  Partition p;
  for (int x : assignment) require(x >= 0, "part indices must be >= 0");
  p.k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end());
  p.assignment = std::move(assignment);
  return p;
}

Partition Partition::equitable(int n, int k) {
  require(k >= 1 && k <= std::max(n, 1), "need 1 <= k <= n");
  const int g = n / k;
  std::vector<int> a(n, 0);
  for (int v = 0; v < g * k; ++v) a[v] = 1 + v / g;
  Partition p;
  p.assignment = std::move(a);
  p.k = k;
  return p;
}

std::vector<VertexSet> Partition::parts() const {
  std::vector<VertexSet> out(k + 1, VertexSet(order()));
  for (int v = 0; v < order(); ++v) out[assignment[v]].insert(v);
  return out;
}

std::vector<int> Partition::sizes() const {
  std::vector<int> out(k + 1, 0);
  for (int x : assignment) ++out[x];
  return out;
}

bool Partition::equal_sized() const {
  auto s = sizes();
  return std::all_of(s.begin() + 1, s.end(), [&](int x) { return x == s[1]; });
}

SzemerediType SzemerediType::make(Eigen::MatrixXd s, double eps) {
  require(s.rows() == s.cols() && s.rows() >= 1, "type matrix must be square with k >= 1");
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0,1]");
  for (int i = 0; i < s.rows(); ++i) {
    for (int j = 0; j < s.cols(); ++j) {
      require(std::isfinite(s(i, j)) && s(i, j) >= 0.0 && s(i, j) <= 1.0, "type entries must lie in [0,1]");
      require(s(i, j) == s(j, i), "type matrix must be symmetric");
    }
  }
  SzemerediType t;
  t.k = static_cast<int>(s.rows());
  t.eps = eps;
  t.S = std::move(s);
  return t;
}

// ---------------------------------------------------------------------------

bool witnesses_irregularity(std::int64_t e_sub, std::int64_t a_sub, std::int64_t b_sub, std::int64_t e_full,
                            std::int64_t a_full, std::int64_t b_full, double eps) {
  if (a_sub <= 0 || b_sub <= 0) return false;
  if (static_cast<double>(a_sub) < eps * static_cast<double>(a_full)) return false;
  if (static_cast<double>(b_sub) < eps * static_cast<double>(b_full)) return false;
  // |e_sub / (a_sub b_sub) - e_full / (a_full b_full)| >= eps, cross-multiplied.
  const __int128 diff = static_cast<__int128>(e_sub) * a_full * b_full -
                        static_cast<__int128>(e_full) * a_sub * b_sub;
  const double lhs = static_cast<double>(diff < 0 ? -diff : diff);
  const double rhs = eps * static_cast<double>(a_sub) * static_cast<double>(b_sub) *
                     static_cast<double>(a_full) * static_cast<double>(b_full);
  return lhs >= rhs;
}

namespace {

UniformityWitness make_witness(const Graph& g, const VertexSet& a, const VertexSet& b, const VertexSet& a_sub,
                               const VertexSet& b_sub) {
  UniformityWitness w{a_sub, b_sub, 0.0, 0.0};
  w.density = pair_density(g, a_sub, b_sub);
  w.pair_density = pair_density(g, a, b);
  return w;
}

UniformityVerdict exact_scan(const Graph& g, const VertexSet& a, const VertexSet& b, double eps) {
  const auto am = a.members(), bm = b.members();
  const int p = static_cast<int>(am.size()), q = static_cast<int>(bm.size());
  std::vector<std::uint32_t> nbr(q, 0);  // neighbours of b_j among A, as a mask over A indices
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < p; ++i)
      if (g.adjacent(am[i], bm[j])) nbr[j] |= 1u << i;
  std::int64_t e_full = 0;
  for (auto m : nbr) e_full += std::popcount(m);

  UniformityVerdict verdict;
  verdict.mode = UniformityMode::kExact;
  std::vector<int> deg(q), sorted(q);
  std::vector<std::int64_t> e_of(std::size_t{1} << q);
  for (std::uint32_t ma = 1; ma < (1u << p); ++ma) {
    const int sa = std::popcount(ma);
    if (static_cast<double>(sa) < eps * p) continue;
    for (int j = 0; j < q; ++j) deg[j] = std::popcount(nbr[j] & ma);
    // For each |B'| the extreme edge counts come from the top / bottom degrees.
    sorted = deg;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    bool any = false;
    std::int64_t top = 0, bottom = 0;
    for (int sb = 1; sb <= q && !any; ++sb) {
      top += sorted[sb - 1];
      bottom += sorted[q - sb];
      any = witnesses_irregularity(top, sa, sb, e_full, p, q, eps) ||
            witnesses_irregularity(bottom, sa, sb, e_full, p, q, eps);
    }
    if (!any) continue;
    e_of[0] = 0;
    for (std::uint32_t mb = 1; mb < (1u << q); ++mb) {
      e_of[mb] = e_of[mb & (mb - 1)] + deg[std::countr_zero(mb)];
      if (!witnesses_irregularity(e_of[mb], sa, std::popcount(mb), e_full, p, q, eps)) continue;
      VertexSet sa_set(g.order()), sb_set(g.order());
      for (int i = 0; i < p; ++i)
        if (ma >> i & 1u) sa_set.insert(am[i]);
      for (int j = 0; j < q; ++j)
        if (mb >> j & 1u) sb_set.insert(bm[j]);
      verdict.uniform = false;
      verdict.witness = make_witness(g, a, b, sa_set, sb_set);
      return verdict;
    }
  }
  return verdict;
}

class HeuristicSearch {
 public:
  HeuristicSearch(const Graph& g, const VertexSet& a, const VertexSet& b, double eps)
      : g_(g), a_(a), b_(b), eps_(eps), am_(a.members()), bm_(b.members()),
        e_full_(edge_count_between(g, a, b)) {
    min_a_ = static_cast<int>(std::ceil(eps * am_.size() - 1e-12));
    min_b_ = static_cast<int>(std::ceil(eps * bm_.size() - 1e-12));
    min_a_ = std::clamp(min_a_, 1, static_cast<int>(am_.size()));
    min_b_ = std::clamp(min_b_, 1, static_cast<int>(bm_.size()));
  }

  std::optional<UniformityWitness> run(int trials, std::uint64_t seed) {
    if (auto w = structured()) return w;
    std::mt19937_64 rng(seed);
    std::vector<int> pa = am_, pb = bm_;
    for (int t = 0; t < trials; ++t) {
      const int sa = min_a_ + static_cast<int>(rng() % (am_.size() - min_a_ + 1));
      const int sb = min_b_ + static_cast<int>(rng() % (bm_.size() - min_b_ + 1));
      for (int i = 0; i < sa; ++i) std::swap(pa[i], pa[i + rng() % (pa.size() - i)]);
      for (int j = 0; j < sb; ++j) std::swap(pb[j], pb[j + rng() % (pb.size() - j)]);
      if (auto w = check({pa.begin(), pa.begin() + sa}, {pb.begin(), pb.begin() + sb})) return w;
    }
    return std::nullopt;
  }

 private:
  std::optional<UniformityWitness> check(const std::vector<int>& sa, const std::vector<int>& sb) {
    VertexSet x = VertexSet::of(g_.order(), sa), y = VertexSet::of(g_.order(), sb);
    const std::int64_t e = edge_count_between(g_, x, y);
    if (!witnesses_irregularity(e, x.count(), y.count(), e_full_, am_.size(), bm_.size(), eps_)) {
      return std::nullopt;
    }
    return make_witness(g_, a_, b_, x, y);
  }

  // Vertices of `from` ordered by degree into `into`, highest first.
  std::vector<int> by_degree(const std::vector<int>& from, const std::vector<int>& into) {
    VertexSet s = VertexSet::of(g_.order(), into);
    std::vector<std::pair<int, int>> d;
    for (int v : from) d.emplace_back(-g_.degree_into(v, s), v);
    std::sort(d.begin(), d.end());
    std::vector<int> out;
    for (auto& [_, v] : d) out.push_back(v);
    return out;
  }

  std::optional<UniformityWitness> structured() {
    const double dens = static_cast<double>(e_full_) / (static_cast<double>(am_.size()) * bm_.size());
    // Vertices whose cross-degree deviates by at least eps.
    std::vector<int> high, low;
    for (int v : am_) {
      const double dv = static_cast<double>(g_.degree_into(v, b_)) / bm_.size();
      if (dv >= dens + eps_) high.push_back(v);
      if (dv <= dens - eps_) low.push_back(v);
    }
    for (auto* cand : {&high, &low}) {
      if (static_cast<int>(cand->size()) >= min_a_)
        if (auto w = check(*cand, bm_)) return w;
    }
    // Degree-sorted prefixes against all of B, then alternating sharpening.
    auto order_a = by_degree(am_, bm_);
    for (int flip = 0; flip < 2; ++flip) {
      std::vector<int> oa = order_a;
      if (flip) std::reverse(oa.begin(), oa.end());
      for (int s = min_a_; s <= static_cast<int>(oa.size()); ++s) {
        if (auto w = check({oa.begin(), oa.begin() + s}, bm_)) return w;
      }
      std::vector<int> xa(oa.begin(), oa.begin() + min_a_), xb;
      for (int round = 0; round < 4; ++round) {
        auto ob = by_degree(bm_, xa);
        if (flip) std::reverse(ob.begin(), ob.end());
        for (int s = min_b_; s <= static_cast<int>(ob.size()); ++s) {
          if (auto w = check(xa, {ob.begin(), ob.begin() + s})) return w;
        }
        xb.assign(ob.begin(), ob.begin() + min_b_);
        auto oa2 = by_degree(am_, xb);
        if (flip) std::reverse(oa2.begin(), oa2.end());
        xa.assign(oa2.begin(), oa2.begin() + min_a_);
        if (auto w = check(xa, xb)) return w;
      }
    }
    return std::nullopt;
  }

  const Graph& g_;
  const VertexSet& a_;
  const VertexSet& b_;
  double eps_;
  std::vector<int> am_, bm_;
  std::int64_t e_full_;
  int min_a_ = 1, min_b_ = 1;
};

}  // namespace

UniformityVerdict uniformity_check(const Graph& g, const VertexSet& a, const VertexSet& b, double eps,
                                   const UniformityOptions& opts) {
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0,1]");
  require(!a.empty() && !b.empty(), "uniformity check needs nonempty sets");
  require(!a.intersects(b), "uniformity check needs disjoint sets");
  const bool small = a.count() <= kExactUniformityCap && b.count() <= kExactUniformityCap;
  UniformityMode mode = opts.mode;
  if (mode == UniformityMode::kAuto) mode = small ? UniformityMode::kExact : UniformityMode::kHeuristic;
  if (mode == UniformityMode::kExact) {
    if (!small) throw CapExceeded("exact uniformity check is limited to parts of size <= 14");
    return exact_scan(g, a, b, eps);
  }
  UniformityVerdict v;
  v.mode = UniformityMode::kHeuristic;
  HeuristicSearch search(g, a, b, eps);
  v.witness = search.run(opts.trials, opts.seed);
  v.uniform = !v.witness.has_value();
  return v;
}

// ---------------------------------------------------------------------------

Rational partition_energy_exact(const Graph& g, const Partition& p) {
  require(p.order() == g.order(), "partition does not cover the graph");
  const auto parts = p.parts();
  const auto sizes = p.sizes();
  const std::int64_t n = g.order();
  Rational total = 0;
  for (int i = 1; i <= p.k; ++i) {
    if (sizes[i] == 0) continue;
    for (int j = 1; j <= p.k; ++j) {
      if (sizes[j] == 0) continue;
      const std::int64_t e = edge_count_between(g, parts[i], parts[j]);
      if (e == 0) continue;
      total += Rational(BigInt(e) * e, BigInt(sizes[i]) * sizes[j]);
    }
  }
  return n == 0 ? Rational(0) : total / Rational(BigInt(n) * n);
}

double partition_energy(const Graph& g, const Partition& p) { return to_double(partition_energy_exact(g, p)); }

RefineResult refine_step(const Graph& g, const Partition& p, double eps, const UniformityOptions& opts) {
  const auto parts = p.parts();
  const auto sizes = p.sizes();
  const double n2 = static_cast<double>(g.order()) * g.order();
  std::vector<std::vector<VertexSet>> cuts(p.k + 1);
  RefineResult out;
  for (int i = 1; i <= p.k; ++i) {
    for (int j = i + 1; j <= p.k; ++j) {
      if (sizes[i] == 0 || sizes[j] == 0) continue;
      UniformityOptions o = opts;
      o.seed = opts.seed + static_cast<std::uint64_t>(i) * 1000003u + j;
      auto v = uniformity_check(g, parts[i], parts[j], eps, o);
      if (v.mode != UniformityMode::kExact) out.all_exact = false;
      if (v.uniform) continue;
      ++out.irregular_pairs;
      out.irregular_weight += 2.0 * sizes[i] * sizes[j] / n2;
      cuts[i].push_back(v.witness->a);
      cuts[j].push_back(v.witness->b);
    }
  }
  // Venn refinement: vertices of a part sharing a membership signature stay together.
  std::vector<int> assignment(g.order(), 0);
  int next = 0;
  for (int i = 1; i <= p.k; ++i) {
    std::map<std::vector<bool>, int> cell;
    for (int v : parts[i].members()) {
      std::vector<bool> sig;
      for (const auto& c : cuts[i]) sig.push_back(c.contains(v));
      auto [it, fresh] = cell.emplace(sig, next + 1);
      if (fresh) ++next;
      assignment[v] = it->second;
    }
  }
  out.refined = Partition::from_assignment(std::move(assignment));
  out.refined.k = next;
  out.gain = to_double(partition_energy_exact(g, out.refined) - partition_energy_exact(g, p));
  return out;
}

Eigen::MatrixXd extract_type_matrix(const Graph& g, const Partition& p) {
  const auto parts = p.parts();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p.k, p.k);
  for (int i = 1; i <= p.k; ++i) {
    for (int j = i + 1; j <= p.k; ++j) {
      if (parts[i].empty() || parts[j].empty()) continue;
      s(i - 1, j - 1) = s(j - 1, i - 1) = pair_density(g, parts[i], parts[j]);
    }
  }
  return s;
}

namespace {

struct Audit {
  int pairs = 0;
  double weight = 0.0;
};

Audit audit_partition(const Graph& g, const Partition& p, double eps, const UniformityOptions& opts) {
  const auto parts = p.parts();
  const double n2 = static_cast<double>(g.order()) * g.order();
  Audit a;
  for (int i = 1; i <= p.k; ++i) {
    for (int j = i + 1; j <= p.k; ++j) {
      if (parts[i].empty() || parts[j].empty()) continue;
      UniformityOptions o = opts;
      o.seed = opts.seed + static_cast<std::uint64_t>(i) * 1000003u + j;
      if (!uniformity_check(g, parts[i], parts[j], eps, o).uniform) {
        ++a.pairs;
        a.weight += 2.0 * parts[i].count() * parts[j].count() / n2;
      }
    }
  }
  return a;
}

// Chops every part into blocks of a common size, spilling the rest into C_0.
Partition equalize(const Partition& p, double eps) {
  const auto sizes = p.sizes();
  const int n = p.order();
  const int largest = *std::max_element(sizes.begin() + 1, sizes.end());
  int block = 1;
  for (int g = std::max(largest, 1); g >= 1; --g) {
    long long leftover = sizes[0];
    for (int i = 1; i <= p.k; ++i) leftover += sizes[i] % g;
    if (static_cast<double>(leftover) < eps * n || g == 1) {
      block = g;
      break;
    }
  }
  std::vector<int> assignment(n, 0);
  std::vector<int> filled(p.k + 1, 0), label(p.k + 1, 0);
  const auto parts = p.parts();
  int next = 0;
  for (int i = 1; i <= p.k; ++i) {
    const int chunks = sizes[i] / block;
    int seen = 0;
    for (int v : parts[i].members()) {
      const int c = seen++ / block;
      assignment[v] = c < chunks ? next + 1 + c : 0;
    }
    next += chunks;
  }
  Partition out = Partition::from_assignment(std::move(assignment));
  out.k = next;
  return out;
}

}  // namespace

DecomposeResult regular_decompose(const Graph& g, double eps, const DecomposeOptions& opts) {
  const int n = g.order();
  require(n >= 2, "regular_decompose needs n >= 2");
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0,1]");
  int k0 = opts.initial_parts > 0 ? opts.initial_parts : static_cast<int>(std::ceil(1.0 / eps - 1e-12));
  k0 = std::clamp(k0, 1, n);
  std::vector<int> start(n);
  for (int v = 0; v < n; ++v) start[v] = 1 + static_cast<int>(static_cast<long long>(v) * k0 / n);
  Partition p = Partition::from_assignment(std::move(start));

  DecomposeResult out;
  for (;;) {
    out.energies.push_back(partition_energy(g, p));
    if (out.iterations >= opts.max_iterations) {
      out.note = "iteration cap reached";
      break;
    }
    auto step = refine_step(g, p, eps, opts.uniformity);
    if (step.irregular_weight <= eps) {
      out.uniform = true;
      break;
    }
    ++out.iterations;
    if (step.refined.k > opts.k_cap) {
      out.k_cap_exceeded = true;
      out.note = "k_cap exceeded; returning the last partition within the cap";
      break;
    }
    p = std::move(step.refined);
  }
  out.partition = equalize(p, eps);
  const auto sizes = out.partition.sizes();
  if (!(static_cast<double>(sizes[0]) < eps * n)) {
    out.note += out.note.empty() ? "" : "; ";
    out.note += "exceptional set is not smaller than eps n";
  }
  auto audit = audit_partition(g, out.partition, eps, opts.uniformity);
  out.audit_irregular_pairs = audit.pairs;
  out.audit_irregular_weight = audit.weight;
  out.type = SzemerediType::make(extract_type_matrix(g, out.partition), eps);
  return out;
}

// ---------------------------------------------------------------------------

MembershipResult type_membership(const Graph& g, const SzemerediType& s, const MembershipOptions& opts) {
  const int n = g.order();
  const int k = s.k;
  require(k >= 1 && k <= n, "need 1 <= k <= n");
  MembershipResult out;

  std::vector<Partition> candidates;
  if (opts.candidate) {
    require(opts.candidate->order() == n, "candidate partition does not cover the graph");
    candidates.push_back(*opts.candidate);
  }
  std::mt19937_64 rng(opts.uniformity.seed);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int r = 0; r < opts.restarts; ++r) {
    if (r > 0) std::shuffle(perm.begin(), perm.end(), rng);
    Partition base = Partition::equitable(n, k);
    Partition p;
    p.k = k;
    p.assignment.assign(n, 0);
    for (int v = 0; v < n; ++v) p.assignment[perm[v]] = base.assignment[v];
    candidates.push_back(std::move(p));
  }

  for (const auto& cand : candidates) {
    if (cand.k != k || !cand.equal_sized()) continue;
    const auto sizes = cand.sizes();
    if (!(sizes[0] < s.eps * n)) continue;
    const double tol = opts.tolerance >= 0.0 ? opts.tolerance : 1.0 / (double(sizes[1]) * sizes[1]);
    const Eigen::MatrixXd d = extract_type_matrix(g, cand);
    // Best relabelling of parts: exhaustive for small k.
    std::vector<int> lab(k);
    std::iota(lab.begin(), lab.end(), 0);
    std::vector<int> best_lab = lab;
    double best = std::numeric_limits<double>::infinity();
    do {
      double gap = 0.0;
      for (int i = 0; i < k && gap < best; ++i)
        for (int j = i + 1; j < k; ++j) gap = std::max(gap, std::abs(d(lab[i], lab[j]) - s.S(i, j)));
      if (gap < best) best = gap, best_lab = lab;
    } while (k <= 7 && std::next_permutation(lab.begin(), lab.end()));
    if (best < out.max_gap) out.max_gap = best;
    if (best > tol + 1e-12) continue;
    Audit audit = audit_partition(g, cand, s.eps, opts.uniformity);
    if (audit.pairs > s.eps * k * k) continue;
    // Part lab[i] of the candidate plays the role of type index i.
    Partition cert = cand;
    std::vector<int> inverse(k + 1, 0);
    for (int i = 0; i < k; ++i) inverse[best_lab[i] + 1] = i + 1;
    for (int& x : cert.assignment) x = x == 0 ? 0 : inverse[x];
    out.member = true;
    out.certificate = std::move(cert);
    out.max_gap = best;
    out.tolerance = tol;
    return out;
  }
  out.note = "no certificate found among the searched partitions";
  return out;
}

}  // namespace fhist
