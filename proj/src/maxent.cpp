#include "fhist/maxent.hpp"

#include "fhist/error.hpp"
#include "fhist/mean_density.hpp"
#include "fhist/parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

namespace fhist {

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

EntropyValue entropy(const Eigen::MatrixXd& s) {
  const int k = static_cast<int>(s.rows());
  EntropyValue e;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) e.H += binary_entropy(s(i, j));
  e.per_edge = e.H / (static_cast<double>(k) * k);
  return e;
}

double upper_l1(const Eigen::MatrixXd& s) {
  double total = 0.0;
  for (int i = 0; i < s.rows(); ++i)
    for (int j = i + 1; j < s.cols(); ++j) total += std::abs(s(i, j));
  return total;
}

// ---------------------------------------------------------------------------

ConstraintSpec ConstraintSpec::make(std::vector<Graph> family, Eigen::VectorXd phi, Eigen::VectorXd gamma, int k,
                                    double eps) {
  require(!family.empty(), "constraint family is empty");
  require(phi.size() == static_cast<Eigen::Index>(family.size()), "phi must have one entry per family member");
  require(gamma.size() == phi.size(), "gamma must have one entry per family member");
  require(k >= 2, "k must be >= 2");
  require(eps >= 0.0 && eps <= 1.0, "eps must lie in [0,1]");
  ConstraintSpec s;
  for (const auto& f : family) {
    require(f.order() <= k, "k is smaller than a family member");
    s.r_bar = std::max(s.r_bar, f.order());
  }
  for (Eigen::Index m = 0; m < phi.size(); ++m) {
    require(phi[m] >= 0.0 && phi[m] <= 1.0, "phi entries must lie in [0,1]");
    require(gamma[m] >= 0.0, "gamma entries must be >= 0");
  }
  s.family = std::move(family);
  s.phi = std::move(phi);
  s.gamma = std::move(gamma);
  s.k = k;
  s.eps = eps;
  return s;
}

double ConstraintSpec::counting_slack() const {
  return eps > 0.0 ? 5.0 * std::pow(eps, 1.0 / r_bar) : 0.0;
}

ConstraintSpec ConstraintSpec::widened() const {
  ConstraintSpec s = *this;
  s.gamma = gamma.array() + counting_slack();
  return s;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kEdgeClamp = 1e-14;

Eigen::VectorXd clamp01(const Eigen::VectorXd& x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

class Problem {
 public:
  Problem(const ConstraintSpec& spec) : spec_(spec), k_(spec.k), p_(spec.k * (spec.k - 1) / 2) {}

  int size() const { return p_; }
  int constraints() const { return static_cast<int>(spec_.family.size()); }

  Eigen::VectorXd densities(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd s = from_upper(x, k_);
    Eigen::VectorXd t(constraints());
    MeanDensityOptions exact;
    exact.exact_limit = std::numeric_limits<double>::infinity();
    for (int m = 0; m < constraints(); ++m) t[m] = mean_density_report(s, spec_.family[m], exact).value;
    return t;
  }

  Eigen::VectorXd densities(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    Eigen::MatrixXd s = from_upper(x, k_);
    Eigen::VectorXd t(constraints()), g;
    jac.resize(p_, constraints());
    for (int m = 0; m < constraints(); ++m) {
      t[m] = mean_density_gradient(s, spec_.family[m], g);
      jac.col(m) = g;
    }
    return t;
  }

  double entropy(const Eigen::VectorXd& x) const {
    double h = 0.0;
    for (int i = 0; i < p_; ++i) h += binary_entropy(x[i]);
    return h;
  }

  // Augmented Lagrangian of -H / P with two inequalities per constraint.
  double lagrangian(const Eigen::VectorXd& x, const Eigen::VectorXd& t, const Eigen::VectorXd& l1,
                    const Eigen::VectorXd& l2, double mu) const {
    double v = -entropy(x) / p_;
    for (int m = 0; m < constraints(); ++m) {
      const double c = t[m] - spec_.phi[m];
      const double g1 = c - spec_.gamma[m], g2 = -c - spec_.gamma[m];
      v += 0.5 * mu * (sq(std::max(0.0, g1 + l1[m] / mu)) - sq(l1[m] / mu));
      v += 0.5 * mu * (sq(std::max(0.0, g2 + l2[m] / mu)) - sq(l2[m] / mu));
    }
    return v;
  }

  Eigen::VectorXd lagrangian_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& t, const Eigen::MatrixXd& jac,
                                      const Eigen::VectorXd& l1, const Eigen::VectorXd& l2, double mu) const {
    Eigen::VectorXd g(p_);
    for (int i = 0; i < p_; ++i) {
      const double xc = std::clamp(x[i], kEdgeClamp, 1.0 - kEdgeClamp);
      g[i] = -std::log((1.0 - xc) / xc) / p_;
    }
    for (int m = 0; m < constraints(); ++m) {
      const double c = t[m] - spec_.phi[m];
      const double w = std::max(0.0, l1[m] + mu * (c - spec_.gamma[m])) -
                       std::max(0.0, l2[m] + mu * (-c - spec_.gamma[m]));
      g += w * jac.col(m);
    }
    return g;
  }

  double max_excess(const Eigen::VectorXd& t) const {
    double v = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < constraints(); ++m) v = std::max(v, std::abs(t[m] - spec_.phi[m]) - spec_.gamma[m]);
    return v;
  }

  const ConstraintSpec& spec() const { return spec_; }

 private:
  static double sq(double v) { return v * v; }
  const ConstraintSpec& spec_;
  int k_, p_;
};

struct StartResult {
  Eigen::VectorXd x;
  StartLog log;
};

StartResult solve_from(const Problem& prob, Eigen::VectorXd x, const SolverOptions& opts) {
  const int d = prob.constraints();
  Eigen::VectorXd l1 = Eigen::VectorXd::Zero(d), l2 = Eigen::VectorXd::Zero(d);
  double mu = 10.0;
  double prev_violation = std::numeric_limits<double>::infinity();
  bool converged = false;
  Eigen::MatrixXd jac;
  x = clamp01(x);

  for (int outer = 0; outer < opts.outer_iterations; ++outer) {
    // Spectral projected gradient with a nonmonotone Armijo search.
    Eigen::VectorXd t = prob.densities(x, jac);
    double f = prob.lagrangian(x, t, l1, l2, mu);
    Eigen::VectorXd g = prob.lagrangian_gradient(x, t, jac, l1, l2, mu);
    std::deque<double> recent{f};
    double step = 1.0;
    {
      const double pg = (clamp01(x - g) - x).lpNorm<Eigen::Infinity>();
      if (pg > 0) step = 1.0 / pg;
    }
    bool inner_done = false;
    for (int it = 0; it < opts.inner_iterations; ++it) {
      if ((clamp01(x - g) - x).lpNorm<Eigen::Infinity>() <= opts.inner_tolerance) {
        inner_done = true;
        break;
      }
      step = std::clamp(step, 1e-12, 1e12);
      Eigen::VectorXd dir = clamp01(x - step * g) - x;
      const double slope = g.dot(dir);
      const double ref = *std::max_element(recent.begin(), recent.end());
      double lambda = 1.0;
      Eigen::VectorXd xn, tn;
      double fn = 0.0;
      for (int ls = 0; ls < 60; ++ls) {
        xn = x + lambda * dir;
        tn = prob.densities(xn);
        fn = prob.lagrangian(xn, tn, l1, l2, mu);
        if (fn <= ref + 1e-4 * lambda * slope) break;
        lambda *= 0.5;
      }
      tn = prob.densities(xn, jac);
      Eigen::VectorXd gn = prob.lagrangian_gradient(xn, tn, jac, l1, l2, mu);
      const Eigen::VectorXd s = xn - x, y = gn - g;
      const double sy = s.dot(y);
      step = sy > 0 ? s.squaredNorm() / sy : 1e12;
      if (s.lpNorm<Eigen::Infinity>() == 0.0) {
        inner_done = true;
        break;
      }
      x = xn;
      g = gn;
      recent.push_back(fn);
      if (recent.size() > 10) recent.pop_front();
    }

    const Eigen::VectorXd t_now = prob.densities(x);
    double violation = 0.0;
    double complementarity = 0.0;
    for (int m = 0; m < d; ++m) {
      const double c = t_now[m] - prob.spec().phi[m];
      const double g1 = c - prob.spec().gamma[m], g2 = -c - prob.spec().gamma[m];
      violation = std::max({violation, g1, g2});
      l1[m] = std::max(0.0, l1[m] + mu * g1);
      l2[m] = std::max(0.0, l2[m] + mu * g2);
      complementarity = std::max({complementarity, std::abs(l1[m] * g1), std::abs(l2[m] * g2)});
    }
    if (inner_done && violation <= 1e-10 && complementarity <= 1e-10) {
      converged = true;
      break;
    }
    if (violation > 0.25 * prev_violation) mu = std::min(mu * 10.0, 1e12);
    prev_violation = violation;
  }

  StartResult r;
  r.x = x;
  r.log.entropy = prob.entropy(x);
  r.log.max_excess = prob.max_excess(prob.densities(x));
  r.log.converged = converged;
  return r;
}

}  // namespace

MaxEntSolution solve_max_entropy(const ConstraintSpec& spec, const SolverOptions& opts) {
  require(opts.starts >= 1, "need at least one start");
  Problem prob(spec);
  const int p = prob.size();

  std::vector<Eigen::VectorXd> x0;
  std::vector<std::string> kinds;
  x0.push_back(Eigen::VectorXd::Constant(p, 0.5));
  kinds.push_back("half");
  const auto edges = spec.family.front().edge_count();
  if (opts.starts > 1 && edges > 0) {
    x0.push_back(Eigen::VectorXd::Constant(p, std::pow(spec.phi[0], 1.0 / static_cast<double>(edges))));
    kinds.push_back("constant");
  }
  while (static_cast<int>(x0.size()) < opts.starts) {
    std::mt19937_64 rng(opts.seed + x0.size());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd x(p);
    for (int i = 0; i < p; ++i) x[i] = u(rng);
    x0.push_back(x);
    kinds.push_back("random");
  }

  std::vector<StartResult> results(x0.size());
  parallel_chunks(x0.size(), [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t i = b; i < e; ++i) {
      results[i] = solve_from(prob, x0[i], opts);
      results[i].log.kind = kinds[i];
    }
  });

  MaxEntSolution sol;
  int best = -1;
  for (int i = 0; i < static_cast<int>(results.size()); ++i) {
    sol.starts.push_back(results[i].log);
    const bool feas = results[i].log.max_excess <= opts.feasibility_tolerance;
    if (best < 0) {
      best = i;
      continue;
    }
    const bool best_feas = results[best].log.max_excess <= opts.feasibility_tolerance;
    if (feas && !best_feas) {
      best = i;
    } else if (feas == best_feas) {
      const bool better = feas ? results[i].log.entropy > results[best].log.entropy
                               : results[i].log.max_excess < results[best].log.max_excess;
      if (better) best = i;
    }
  }
  const auto& r = results[best];
  sol.best_start = best;
  sol.S = from_upper(r.x, spec.k);
  sol.entropy = r.log.entropy;
  sol.per_edge_entropy = sol.entropy / (static_cast<double>(spec.k) * spec.k);
  sol.densities = prob.densities(r.x);
  sol.residuals = (sol.densities - spec.phi).cwiseAbs();
  sol.feasible = r.log.max_excess <= opts.feasibility_tolerance;
  sol.converged = r.log.converged && sol.feasible;
  return sol;
}

// ---------------------------------------------------------------------------

double smallest_singular_value(const Eigen::MatrixXd& j) {
  if (j.rows() < j.cols() || j.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
  return svd.singularValues().minCoeff();
}

JacobianReport density_jacobian(const Eigen::MatrixXd& s, const std::vector<Graph>& family) {
  const int k = static_cast<int>(s.rows());
  JacobianReport r;
  r.J.resize(k * (k - 1) / 2, static_cast<Eigen::Index>(family.size()));
  r.densities.resize(static_cast<Eigen::Index>(family.size()));
  Eigen::VectorXd g;
  for (std::size_t m = 0; m < family.size(); ++m) {
    r.densities[m] = mean_density_gradient(s, family[m], g);
    r.J.col(m) = g;
  }
  r.sigma_min = smallest_singular_value(r.J);
  return r;
}

namespace {

// Euclidean projection onto the L1 ball of the given radius.
Eigen::VectorXd project_l1(const Eigen::VectorXd& v, double radius) {
  if (v.lpNorm<1>() <= radius) return v;
  std::vector<double> u(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) u[i] = std::abs(v[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - radius) / static_cast<double>(i + 1);
    if (i + 1 == u.size() || u[i + 1] <= t) {
      theta = t;
      break;
    }
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = std::copysign(std::max(std::abs(v[i]) - theta, 0.0), v[i]);
  }
  return out;
}

class SigmaEstimator {
 public:
  SigmaEstimator(const Eigen::MatrixXd& s, const std::vector<Graph>& family, const RadiusOptions& opts)
      : k_(static_cast<int>(s.rows())), x0_(upper_entries(s)), family_(family), opts_(opts) {
    std::mt19937_64 rng(opts.seed);
    std::exponential_distribution<double> ex(1.0);
    const Eigen::Index p = x0_.size();
    for (int i = 0; i < opts.samples; ++i) {
      Eigen::VectorXd u(p);
      for (Eigen::Index j = 0; j < p; ++j) u[j] = ex(rng) * ((rng() & 1u) ? 1.0 : -1.0);
      dirs_.push_back(u / u.lpNorm<1>());
    }
    center_sigma_ = sigma_at(x0_);
  }

  double sigma_at(const Eigen::VectorXd& x) const {
    return density_jacobian(from_upper(x, k_), family_).sigma_min;
  }

  // Sampled minimum over the L1 ball of radius rho, then local descent.
  double operator()(double rho) const {
    double best = center_sigma_;
    Eigen::VectorXd worst = x0_;
    for (const auto& u : dirs_) {
      Eigen::VectorXd x = clamp01(x0_ + rho * u);
      const double v = sigma_at(x);
      if (v < best) best = v, worst = x;
    }
    // Projected descent on sigma_min using forward differences.
    Eigen::VectorXd x = worst;
    for (int step = 0; step < opts_.descent_steps && best > 0.0; ++step) {
      const double h = 1e-6;
      Eigen::VectorXd grad(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd xp = x;
        xp[i] = x[i] + h <= 1.0 ? x[i] + h : x[i] - h;
        grad[i] = (sigma_at(xp) - best) / (xp[i] - x[i]);
      }
      const double gn = grad.lpNorm<1>();
      if (gn == 0.0) break;
      bool moved = false;
      for (double eta = rho / gn; eta > 1e-12 * rho; eta *= 0.5) {
        Eigen::VectorXd xn = clamp01(x0_ + project_l1(x - eta * grad - x0_, rho));
        const double v = sigma_at(xn);
        if (v < best) {
          best = v, x = xn, moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    return best * opts_.sigma_scale;
  }

 private:
  int k_;
  Eigen::VectorXd x0_;
  const std::vector<Graph>& family_;
  RadiusOptions opts_;
  std::vector<Eigen::VectorXd> dirs_;
  double center_sigma_ = 0.0;
};

}  // namespace

EffectiveRadius effective_radius(const Eigen::MatrixXd& s, const std::vector<Graph>& family, double eps, int d,
                                 const RadiusOptions& opts) {
  require(!family.empty(), "family is empty");
  require(eps >= 0.0, "eps must be >= 0");
  int r_bar = 0;
  for (const auto& f : family) r_bar = std::max(r_bar, f.order());
  const int k = static_cast<int>(s.rows());
  const double cap = k * (k - 1) / 2.0;
  EffectiveRadius out;
  out.target = 10.0 * d * std::pow(eps, 1.0 / r_bar);
  out.annotation =
      "sigma is a sampled upper estimate of the minimum over the ball, so rho may be underestimated "
      "(heuristic lower-confidence value)";
  SigmaEstimator sigma(s, family, opts);
  auto ok = [&](double rho, double& sig) {
    sig = sigma(rho);
    return rho * sig >= out.target;
  };

  // Geometric scan upward, then bisection inside the first passing bracket.
  double lo = 0.0, hi = -1.0, sig = 0.0, sig_hi = 0.0;
  for (int j = 40; j >= 0; --j) {
    const double rho = cap * std::ldexp(1.0, -j);
    if (ok(rho, sig)) {
      hi = rho, sig_hi = sig;
      break;
    }
    lo = rho;
  }
  if (hi < 0.0) {
    out.rho = cap;
    out.sigma_hat = sigma(cap);
    out.sentinel = true;
    return out;
  }
  for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid, sig)) {
      hi = mid, sig_hi = sig;
    } else {
      lo = mid;
    }
  }
  out.rho = hi;
  out.sigma_hat = sig_hi;
  return out;
}

// ---------------------------------------------------------------------------

ScalarShift scalar_shift(const Eigen::MatrixXd& s, const Graph& f, double phi_prime, double tolerance) {
  require(phi_prime >= 0.0 && phi_prime <= 1.0, "phi' must lie in [0,1]");
  const int k = static_cast<int>(s.rows());
  const double pairs = k * (k - 1) / 2.0;
  const double choose_r2 = f.order() * (f.order() - 1) / 2.0;
  ScalarShift out;
  out.start_density = mean_density(s, f);
  out.upward = phi_prime >= out.start_density;
  if (f.edge_count() == 0) require(phi_prime == 1.0, "an edgeless pattern only reaches density 1");

  auto moved = [&](double a) {
    Eigen::MatrixXd m = s;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j) m(i, j) = out.upward ? s(i, j) + a * (1.0 - s(i, j)) : s(i, j) * (1.0 - a);
    return m;
  };
  double lo = 0.0, hi = 1.0, a = 0.0;
  double t = out.start_density;
  if (std::abs(t - phi_prime) > tolerance) {
    // bisect to machine precision so alpha itself is exact, not just t
    for (int it = 0; it < 200 && hi - lo > 1e-16 && t != phi_prime; ++it) {
      a = 0.5 * (lo + hi);
      t = mean_density(moved(a), f);
      const bool short_of = out.upward ? t < phi_prime : t > phi_prime;
      (short_of ? lo : hi) = a;
    }
    if (std::abs(t - phi_prime) > tolerance) throw Infeasible("scalar shift cannot reach the requested density");
  }
  out.alpha = a;
  out.S_bar = moved(a);
  out.achieved = t;
  out.l1_move = upper_l1(out.S_bar - s);
  const double phi = out.start_density;
  const double denom = 1.0 - std::min(phi, phi_prime);
  out.bound = denom > 0.0 ? std::pow(std::abs(phi - phi_prime) / denom, 1.0 / choose_r2) * pairs : pairs;
  out.downward_bound = phi > 0.0 ? std::pow(std::max(phi - phi_prime, 0.0) / phi, 1.0 / choose_r2) * pairs : 0.0;
  out.within_bound = out.l1_move <= out.bound + 1e-9;
  return out;
}

ContinuityCheck continuity_bound(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2) {
  require(s1.rows() == s2.rows() && s1.cols() == s2.cols(), "types must share k");
  const double k2 = static_cast<double>(s1.rows()) * s1.rows();
  const double x = std::min(upper_l1(s1 - s2) / (4.0 * k2), 0.5);
  ContinuityCheck c;
  c.bound = 5.0 * binary_entropy(x);
  c.entropy_gap = entropy(s2).H - entropy(s1).H;
  c.entropy_cap = 5.0 * k2 * binary_entropy(x);
  c.holds = c.entropy_gap <= c.entropy_cap + 1e-12;
  return c;
}

CombinatorialBounds combinatorial_bounds(long long n, int k, double eps, const Eigen::MatrixXd& s) {
  require(k >= 1 && n >= k, "need n >= k >= 1");
  require(s.rows() == k, "type matrix size must equal k");
  const double nn = static_cast<double>(n) * n, kk = static_cast<double>(k) * k;
  CombinatorialBounds b;
  b.log_type_count = kk * std::log(nn / kk + 1.0);
  b.type_count_per_edge = b.log_type_count / nn;
  b.eight_k_over_n = 8.0 * k / static_cast<double>(n);
  const double h = entropy(s).per_edge;
  b.class_size_upper = h + 2.0 * eps;
  const double g = std::floor(static_cast<double>(n) / k);
  // Fraction of block graphs that fail to be eps-uniform is at most
  // 2^(-g^2 (2 eps^4 - 4/g)); the estimate is vacuous once that reaches 1.
  const double exponent = -g * g * (2.0 * std::pow(eps, 4) - 4.0 / g);
  if (g >= 1.0 && exponent < 0.0) {
    const double x = std::exp2(exponent);
    b.lower_correction = -(2.0 * std::log(g) + 1.0) * kk / nn + std::log1p(-x) / nn;
    b.class_size_lower = h + b.lower_correction;
  }
  return b;
}

// ---------------------------------------------------------------------------

namespace {

bool is_clique(const Graph& f) {
  const long long r = f.order();
  return static_cast<long long>(f.edge_count()) == r * (r - 1) / 2;
}

struct SidedBound {
  double center = 0.0;
  double continuity = 0.0;
  MaxEntSolution solution;
  std::optional<EffectiveRadius> radius;
  std::optional<double> scalar_constant;
  std::vector<std::string> notes;
};

SidedBound solve_side(const ConstraintSpec& spec, const SolverOptions& solver, const RadiusOptions& radius) {
  SidedBound b;
  b.solution = solve_max_entropy(spec.widened(), solver);
  if (!b.solution.feasible) throw Infeasible("maximum-entropy program is infeasible");
  b.center = b.solution.per_edge_entropy;
  const int k = spec.k;
  if (spec.family.size() == 1 && is_clique(spec.family[0]) && spec.eps > 0.0) {
    const int r = spec.family[0].order();
    const double phi = spec.phi[0], gamma = spec.gamma[0];
    const double base = phi + gamma < 1.0 ? 1.0 - phi - gamma : 1.0 - phi + gamma;
    const double c = std::pow(10.0 / base, 1.0 / (r * (r - 1) / 2.0));
    const double arg = c * std::pow(spec.eps, 1.0 / (double(r) * r * r));
    b.scalar_constant = c;
    if (arg > 0.5) b.notes.push_back("scalar continuity argument exceeds 1/2; term capped at 5 log 2 (vacuous)");
    b.continuity = 5.0 * binary_entropy(std::min(arg, 0.5));
  } else {
    b.radius = effective_radius(b.solution.S, spec.family, spec.eps, static_cast<int>(spec.family.size()), radius);
    if (b.radius->sentinel) b.notes.push_back("effective radius hit the sentinel C(k,2)");
    b.continuity = 5.0 * binary_entropy(std::min(b.radius->rho / (4.0 * k * k), 0.5));
  }
  return b;
}

}  // namespace

SizeBoundsReport densities_size_bounds(const ConstraintSpec& spec, long long n, const SolverOptions& solver,
                                       const RadiusOptions& radius) {
  require(n >= spec.k, "n must be >= k");
  SizeBoundsReport rep;
  rep.target = "densities";
  SidedBound b = solve_side(spec, solver, radius);
  const double type_count = 8.0 * spec.k / static_cast<double>(n);
  rep.slack_terms["counting_lemma"] = spec.counting_slack();
  rep.slack_terms["continuity"] = b.continuity;
  rep.slack_terms["class_size"] = 2.0 * spec.eps;
  rep.slack_terms["type_count"] = type_count;
  const double slack = b.continuity + 2.0 * spec.eps + type_count;
  rep.upper_center = b.center;
  rep.lower_center = b.center;
  rep.upper = b.center + slack;
  rep.lower = b.center - slack;
  rep.scalar_constant = b.scalar_constant;
  rep.notes = b.notes;
  rep.notes.push_back("an o_eps(1) term remains on both sides and is not included numerically");
  rep.upper_solution = std::move(b.solution);
  rep.upper_radius = b.radius;
  return rep;
}

SizeBoundsReport hist_size_bounds(const Distribution& p, const RootedPattern& f, double delta, int d, int k,
                                  double eps, long long n, const HistBoundsOptions& opts) {
  require(n >= k, "n must be >= k");
  SizeBoundsReport rep;
  rep.target = "hist";
  const auto radii = sandwich_radii(p, f, d, delta, n, opts.norm, opts.slack_constant);
  const Eigen::VectorXd phi = phi_vector(p, f, d, opts.norm).phi.cwiseMin(1.0);
  std::vector<Graph> family;
  for (const auto& fm : merged_family(f, d)) family.push_back(fm.graph);
  const double type_count = 8.0 * k / static_cast<double>(n);

  ConstraintSpec outer = ConstraintSpec::make(family, phi, radii.gamma.array() + radii.slack, k, eps);
  SidedBound up = solve_side(outer, opts.solver, opts.radius);
  rep.upper_center = up.center;
  rep.upper = up.center + up.continuity + 2.0 * eps + type_count;
  rep.upper_solution = up.solution;
  rep.upper_radius = up.radius;
  rep.scalar_constant = up.scalar_constant;
  rep.slack_terms["finite_n_gamma"] = radii.slack;
  rep.slack_terms["counting_lemma"] = outer.counting_slack();
  rep.slack_terms["continuity_upper"] = up.continuity;
  rep.slack_terms["class_size"] = 2.0 * eps;
  rep.slack_terms["type_count"] = type_count;
  for (auto& note : up.notes) rep.notes.push_back("upper: " + note);

  if (radii.beta.feasible) {
    ConstraintSpec inner = ConstraintSpec::make(family, phi, radii.beta.beta, k, eps);
    try {
      SidedBound lo = solve_side(inner, opts.solver, opts.radius);
      rep.lower_center = lo.center;
      rep.lower = lo.center - lo.continuity - 2.0 * eps - type_count;
      rep.lower_solution = lo.solution;
      rep.lower_radius = lo.radius;
      rep.slack_terms["continuity_lower"] = lo.continuity;
      for (auto& note : lo.notes) rep.notes.push_back("lower: " + note);
    } catch (const Infeasible&) {
      rep.notes.push_back("lower: program over the inner radii is infeasible; lower bound vacuous");
    }
  } else {
    rep.notes.push_back("inner radii beta are infeasible for this (delta, d); lower bound vacuous");
  }
  rep.notes.push_back("an o_eps(1) term remains on both sides and is not included numerically");
  return rep;
}

}  // namespace fhist
