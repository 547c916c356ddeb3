#include "fhist/radii.hpp"

#include "fhist/counting.hpp"
#include "fhist/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace fhist {

namespace {

constexpr double kAuditTolerance = 1e-12;

// Leading coefficient of a polynomial of degree `deg` sampled at deg + 2 consecutive integers.
BigInt scaled_leading_coefficient(const std::vector<BigInt>& values, int deg) {
  // returns deg! times the leading coefficient
  auto difference = [&](int order) {
    BigInt acc = 0;
    BigInt coef = 1;  // C(order, i), updated along i
    for (int i = 0; i <= order; ++i) {
      if ((order - i) % 2) acc -= values[i] * coef; else acc += values[i] * coef;
      coef = coef * (order - i) / (i + 1);
    }
    return acc;
  };
  require(difference(deg + 1) == 0, "sampled counts are not a polynomial of the expected degree");
  return difference(deg);
}

double log_tail(double T, int d) {
  // log(T^(d+1) / (d! d))
  return (d + 1) * std::log(T) - std::lgamma(d + 1.0) - std::log(static_cast<double>(d));
}

}  // namespace

std::vector<Rational> c_coefficients_exact(const RootedPattern& f, int d, CopyNormalization norm) {
  require(d >= 1, "d must be >= 1");
  const int q = f.order() - 1;
  // Copies of F^m in K_n times |Aut(F^m)| is (n)_{1+mq}, so F^m itself is never built.
  const long long n0 = f.order();
  std::vector<BigInt> b;
  for (long long i = 0; i <= static_cast<long long>(d) * q + 2; ++i) b.push_back(extremal_counts(f, n0 + i).b_max);
  const std::size_t samples = b.size();
  std::vector<BigInt> num(samples), den(samples), power(samples, 1), falling(samples, 1);
  BigInt scale = 1;  // root_aut^m, or 1 / m! folded into den
  std::vector<Rational> out;
  for (int m = 1; m <= d; ++m) {
    const int deg = m * q + 1;
    const int prev = m == 1 ? 0 : (m - 1) * q + 1;
    if (norm == CopyNormalization::kRootedInjection) scale *= f.root_aut_count; else scale *= m;
    for (std::size_t i = 0; i < samples; ++i) {
      const long long n = n0 + static_cast<long long>(i);
      power[i] *= b[i];
      for (int t = prev; t < deg; ++t) falling[i] *= n - t;
      if (norm == CopyNormalization::kRootedInjection) {
        num[i] = power[i] * scale * n;
        den[i] = falling[i];
      } else {
        num[i] = power[i] * n;
        den[i] = falling[i] * scale;
      }
    }
    out.emplace_back(scaled_leading_coefficient(num, deg), scaled_leading_coefficient(den, deg));
  }
  return out;
}

Eigen::VectorXd c_coefficients(const RootedPattern& f, int d, CopyNormalization norm) {
  auto exact = c_coefficients_exact(f, d, norm);
  Eigen::VectorXd out(d);
  for (int m = 0; m < d; ++m) out[m] = to_double(exact[m]);
  return out;
}

MomentReport phi_vector(const Distribution& p, const RootedPattern& f, int d, CopyNormalization norm) {
  MomentReport r;
  r.d = d;
  r.moments = moment_vector(p, d);
  r.c_coeffs = c_coefficients(f, d, norm);
  r.phi = r.c_coeffs.cwiseProduct(r.moments);
  return r;
}

double ks_upper_bound(const Distribution& p, double gamma, int d, double T, double c, bool clip) {
  require(T > 1.0, "T must be > 1");
  require(gamma >= 0.0, "gamma must be >= 0");
  require(d >= 1, "d must be >= 1");
  const double tail = std::exp(log_tail(T, d));
  const double v = c * (concentration(p, 1.0 / T) + std::exp(T) * (gamma + tail));
  return clip ? std::min(1.0, v) : v;
}

KsBoundArgmin ks_upper_bound_argmin(const Distribution& p, double gamma, int d, double c, double t_max) {
  KsBoundArgmin best;
  best.value = std::numeric_limits<double>::infinity();
  constexpr int kGrid = 400;
  for (int i = 0; i <= kGrid; ++i) {
    const double T = std::exp(std::log(1.0 + 1e-6) + (std::log(t_max) - std::log(1.0 + 1e-6)) * i / kGrid);
    const double v = ks_upper_bound(p, gamma, d, T, c, false);
    if (v < best.value) best = {T, v};
  }
  best.value = std::min(1.0, best.value);
  return best;
}

Eigen::VectorXd gamma_radii(const Distribution& p, const RootedPattern& f, int d, double delta,
                            CopyNormalization norm) {
  require(p.is_piecewise(), "gamma radii need a piecewise density");
  require(p.density_min() > 0.0, "gamma radii need a density bounded away from zero");
  require(delta >= 0.0 && delta <= 1.0, "delta must lie in [0,1]");
  auto rep = phi_vector(p, f, d, norm);
  Eigen::VectorXd g(d);
  for (int m = 1; m <= d; ++m) {
    g[m - 1] = 2.0 * m * rep.c_coeffs[m - 1] / p.density_min() * rep.moments[m - 1] * delta;
  }
  return g;
}

double finite_n_slack(const Eigen::VectorXd& c, long long n, double constant) {
  require(n >= 1, "n must be >= 1");
  return constant * c.maxCoeff() / static_cast<double>(n);
}

BetaRadii beta_radii(const Distribution& p, const RootedPattern& f, int d, double delta,
                     CopyNormalization norm, double c) {
  require(delta > 0.0 && delta <= 1.0, "delta must lie in (0,1]");
  require(d >= 1, "d must be >= 1");
  auto objective = [&](double T) {
    const double gap = delta / c - concentration(p, 1.0 / T);
    return std::exp(-T) * gap - std::exp(log_tail(T, d));
  };
  // Log grid, then golden section on log T around the best grid point.
  constexpr int kGrid = 600;
  const double lo = std::log(1.0 + 1e-9), hi = std::log(700.0);
  int arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double v = objective(std::exp(lo + (hi - lo) * i / kGrid));
    if (v > best) best = v, arg = i;
  }
  double a = lo + (hi - lo) * std::max(arg - 1, 0) / kGrid;
  double b = lo + (hi - lo) * std::min(arg + 1, kGrid) / kGrid;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
  double f1 = objective(std::exp(x1)), f2 = objective(std::exp(x2));
  for (int it = 0; it < 100; ++it) {
    if (f1 < f2) {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + ratio * (b - a), f2 = objective(std::exp(x2));
    } else {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - ratio * (b - a), f1 = objective(std::exp(x1));
    }
  }
  double T = std::exp(lo + (hi - lo) * arg / kGrid);
  if (std::max(f1, f2) > best) {
    best = std::max(f1, f2);
    T = std::exp(f1 > f2 ? x1 : x2);
  }

  BetaRadii out;
  out.T = T;
  out.objective = best;
  out.feasible = best > 0.0;
  const Eigen::VectorXd cm = c_coefficients(f, d, norm);
  out.beta = out.feasible ? Eigen::VectorXd(cm * best) : Eigen::VectorXd::Zero(d);
  return out;
}

SandwichRadii sandwich_radii(const Distribution& p, const RootedPattern& f, int d, double delta,
                             long long n, CopyNormalization norm, double slack_constant) {
  SandwichRadii out;
  out.delta = delta;
  out.gamma = gamma_radii(p, f, d, delta, norm);
  out.slack = finite_n_slack(c_coefficients(f, d, norm), n, slack_constant);
  if (delta > 0.0) {
    out.beta = beta_radii(p, f, d, delta, norm);
  } else {
    out.beta.beta = Eigen::VectorXd::Zero(d);
  }
  return out;
}

namespace {

MomentKsAudit audit(const Distribution& p, const Distribution& q, int d) {
  MomentKsAudit a;
  a.ks = ks_distance(p, q);
  a.w1 = wasserstein1(p, q);
  a.moment_gaps = (moment_vector(p, d) - moment_vector(q, d)).cwiseAbs();
  a.max_gap = a.moment_gaps.maxCoeff();
  for (int m = 1; m <= d; ++m) {
    const double gap = a.moment_gaps[m - 1];
    if (gap > a.ks + kAuditTolerance) a.gaps_within_ks = false;
    if (gap / m > a.w1 + kAuditTolerance) a.gaps_within_w1 = false;
  }
  return a;
}

}  // namespace

MomentKsAudit ks_implies_moments_close(const Distribution& p, const Distribution& q, int d) {
  return audit(p, q, d);
}

MomentKsAudit moments_close_implies_ks(const Distribution& p, const Distribution& q, int d) {
  MomentKsAudit a = audit(p, q, d);
  // The bound is stated with S_p for the reference p.
  auto best = ks_upper_bound_argmin(p, a.max_gap, d);
  a.ks_bound = best.value;
  a.ks_bound_T = best.T;
  a.ks_within_bound = a.ks <= a.ks_bound + kAuditTolerance;
  return a;
}

}  // namespace fhist
