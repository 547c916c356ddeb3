#include "fhist/mean_density.hpp"

#include "fhist/error.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace fhist {

Eigen::VectorXd upper_entries(const Eigen::MatrixXd& s) {
  const int k = static_cast<int>(s.rows());
  Eigen::VectorXd v(k * (k - 1) / 2);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) v[pair_index(i, j, k)] = s(i, j);
  return v;
}

Eigen::MatrixXd from_upper(const Eigen::VectorXd& v, int k, double diagonal) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(k, k, diagonal);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) s(i, j) = s(j, i) = v[pair_index(i, j, k)];
  return s;
}

namespace {

bool is_clique(const Graph& f) {
  const long long r = f.order();
  return static_cast<long long>(f.edge_count()) == r * (r - 1) / 2;
}

double term_count(int k, int r, bool clique) {
  double c = 1.0;
  for (int i = 0; i < r; ++i) c *= static_cast<double>(k - i) / (clique ? (i + 1) : 1);
  return c;
}

// Walks all injective maps (or r-subsets for cliques) and hands each leaf's
// edge pair indices to `leaf`.
class TermWalker {
 public:
  TermWalker(const Eigen::MatrixXd& s, const Graph& f) : s_(s), f_(f), k_(static_cast<int>(s.rows())) {
    const int r = f.order();
    back_.resize(r);
    for (int t = 0; t < r; ++t)
      for (int u = 0; u < t; ++u)
        if (f.adjacent(t, u)) back_[t].push_back(u);
    img_.assign(r, -1);
    used_.assign(k_, 0);
    prod_.assign(r + 1, 1.0);
  }

  template <class Leaf>
  void walk(bool subsets, Leaf&& leaf) {
    rec(0, 0, subsets, leaf);
  }
  const std::vector<int>& image() const { return img_; }

 private:
  template <class Leaf>
  void rec(int t, int start, bool subsets, Leaf& leaf) {
    if (t == f_.order()) {
      leaf(prod_[t]);
      return;
    }
    for (int x = subsets ? start : 0; x < k_; ++x) {
      if (used_[x]) continue;
      double p = prod_[t];
      for (int u : back_[t]) p *= s_(x, img_[u]);
      img_[t] = x;
      used_[x] = 1;
      prod_[t + 1] = p;
      rec(t + 1, x + 1, subsets, leaf);
      used_[x] = 0;
    }
  }

  const Eigen::MatrixXd& s_;
  const Graph& f_;
  int k_;
  std::vector<std::vector<int>> back_;
  std::vector<int> img_;
  std::vector<char> used_;
  std::vector<double> prod_;
};

void check_inputs(const Eigen::MatrixXd& s, const Graph& f) {
  require(s.rows() == s.cols(), "type matrix must be square");
  require(f.order() >= 1, "pattern must have a vertex");
  require(s.rows() >= f.order(), "k is smaller than the pattern");
}

}  // namespace

MeanDensityResult mean_density_report(const Eigen::MatrixXd& s, const Graph& f, const MeanDensityOptions& opts) {
  check_inputs(s, f);
  const int k = static_cast<int>(s.rows()), r = f.order();
  const bool clique = is_clique(f);
  MeanDensityResult out;
  if (term_count(k, r, clique) <= opts.exact_limit) {
    double total = 0.0;
    TermWalker w(s, f);
    w.walk(clique, [&](double p) { total += p; });
    out.value = total / term_count(k, r, clique);
    return out;
  }
  // Uniform injective maps by partial Fisher-Yates.
  out.exact = false;
  std::mt19937_64 rng(opts.seed);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  const auto edges = f.edges();
  double sum = 0.0, sum2 = 0.0;
  for (long long t = 0; t < opts.samples; ++t) {
    for (int i = 0; i < r; ++i) std::swap(perm[i], perm[i + rng() % (k - i)]);
    double p = 1.0;
    for (auto [u, v] : edges) p *= s(perm[u], perm[v]);
    sum += p;
    sum2 += p * p;
  }
  const double n = static_cast<double>(opts.samples);
  out.value = sum / n;
  out.std_error = std::sqrt(std::max(0.0, sum2 / n - out.value * out.value) / std::max(n - 1.0, 1.0));
  return out;
}

double mean_density(const Eigen::MatrixXd& s, const Graph& f) { return mean_density_report(s, f).value; }

double mean_density_gradient(const Eigen::MatrixXd& s, const Graph& f, Eigen::VectorXd& grad) {
  check_inputs(s, f);
  const int k = static_cast<int>(s.rows()), r = f.order();
  const bool clique = is_clique(f);
  const auto edges = f.edges();
  const std::size_t m = edges.size();
  grad = Eigen::VectorXd::Zero(k * (k - 1) / 2);
  std::vector<double> val(m), prefix(m + 1), suffix(m + 1);
  std::vector<int> idx(m);
  double total = 0.0;
  TermWalker w(s, f);
  w.walk(clique, [&](double p) {
    total += p;
    const auto& img = w.image();
    for (std::size_t e = 0; e < m; ++e) {
      const int a = img[edges[e].first], b = img[edges[e].second];
      val[e] = s(a, b);
      idx[e] = pair_index(a, b, k);
    }
    // Products of all other factors, safe when some factor is zero.
    prefix[0] = 1.0;
    for (std::size_t e = 0; e < m; ++e) prefix[e + 1] = prefix[e] * val[e];
    suffix[m] = 1.0;
    for (std::size_t e = m; e-- > 0;) suffix[e] = suffix[e + 1] * val[e];
    for (std::size_t e = 0; e < m; ++e) grad[idx[e]] += prefix[e] * suffix[e + 1];
  });
  const double norm = term_count(k, r, clique);
  grad /= norm;
  return total / norm;
}

MeanDensityResult mean_density_collision(const Eigen::MatrixXd& s, const Graph& f, const MeanDensityOptions& opts) {
  require(s.rows() == s.cols(), "type matrix must be square");
  const int k = static_cast<int>(s.rows()), r = f.order();
  const auto edges = f.edges();
  MeanDensityResult out;
  const double terms = std::pow(static_cast<double>(k), r);
  std::vector<int> j(r, 0);
  auto product = [&] {
    double p = 1.0;
    for (auto [u, v] : edges) p *= s(j[u], j[v]);
    return p;
  };
  if (terms <= opts.exact_limit) {
    double total = 0.0;
    for (;;) {
      total += product();
      int t = 0;
      while (t < r && ++j[t] == k) j[t++] = 0;
      if (t == r) break;
    }
    out.value = total / terms;
    return out;
  }
  out.exact = false;
  std::mt19937_64 rng(opts.seed);
  double sum = 0.0, sum2 = 0.0;
  for (long long t = 0; t < opts.samples; ++t) {
    for (int& x : j) x = static_cast<int>(rng() % k);
    const double p = product();
    sum += p;
    sum2 += p * p;
  }
  const double n = static_cast<double>(opts.samples);
  out.value = sum / n;
  out.std_error = std::sqrt(std::max(0.0, sum2 / n - out.value * out.value) / std::max(n - 1.0, 1.0));
  return out;
}

}  // namespace fhist
