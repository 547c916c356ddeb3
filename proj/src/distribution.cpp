#include "fhist/distribution.hpp"

#include "fhist/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fhist {

namespace {
constexpr double kMassTolerance = 1e-12;
// Float slack for closed-window membership of atoms.
constexpr double kWindowSlack = 1e-12;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }
}  // namespace

Distribution Distribution::piecewise(std::vector<double> breaks, std::vector<double> densities) {
  require(breaks.size() >= 2, "piecewise distribution needs at least two breaks");
  require(densities.size() + 1 == breaks.size(), "need one density per bin");
  double mass = 0.0;
  for (std::size_t i = 0; i < densities.size(); ++i) {
    require(std::isfinite(breaks[i]) && std::isfinite(breaks[i + 1]), "breaks must be finite");
    require(breaks[i] < breaks[i + 1], "breaks must be strictly increasing");
    require(std::isfinite(densities[i]) && densities[i] >= 0.0, "densities must be finite and >= 0");
    mass += densities[i] * (breaks[i + 1] - breaks[i]);
  }
  require(breaks.front() >= 0.0 && breaks.back() <= 1.0, "support must lie in [0,1]");
  require(std::abs(mass - 1.0) <= kMassTolerance, "piecewise density must integrate to 1");

  Distribution p;
  p.kind_ = Kind::kPiecewise;
  p.density_min_ = *std::min_element(densities.begin(), densities.end());
  p.density_max_ = *std::max_element(densities.begin(), densities.end());
  if (breaks.front() > 0.0 || breaks.back() < 1.0) p.density_min_ = 0.0;
  p.breaks_ = std::move(breaks);
  p.densities_ = std::move(densities);
  return p;
}

Distribution Distribution::empirical(std::vector<double> atoms) {
  require(!atoms.empty(), "empirical distribution needs at least one atom");
  for (double a : atoms) require(std::isfinite(a) && a >= 0.0 && a <= 1.0, "atoms must lie in [0,1]");
  std::sort(atoms.begin(), atoms.end());
  Distribution p;
  p.kind_ = Kind::kEmpirical;
  p.atoms_ = std::move(atoms);
  p.density_min_ = 0.0;
  p.density_max_ = std::numeric_limits<double>::infinity();
  return p;
}

double Distribution::cdf(double x) const {
  if (kind_ == Kind::kEmpirical) {
    auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
    return static_cast<double>(it - atoms_.begin()) / static_cast<double>(atoms_.size());
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < densities_.size(); ++i) {
    if (x <= breaks_[i]) break;
    acc += densities_[i] * (std::min(x, breaks_[i + 1]) - breaks_[i]);
  }
  return clamp01(acc);
}

double Distribution::cdf_left(double x) const {
  if (kind_ == Kind::kEmpirical) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x);
    return static_cast<double>(it - atoms_.begin()) / static_cast<double>(atoms_.size());
  }
  return cdf(x);
}

std::vector<double> Distribution::knots() const {
  return kind_ == Kind::kEmpirical ? atoms_ : breaks_;
}

namespace {

std::vector<double> merged_knots(const Distribution& p, const Distribution& q) {
  std::vector<double> x{0.0, 1.0};
  auto a = p.knots(), b = q.knots();
  x.insert(x.end(), a.begin(), a.end());
  x.insert(x.end(), b.begin(), b.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

}  // namespace

double ks_distance(const Distribution& p, const Distribution& q) {
  // P - Q is linear between consecutive knots, so the supremum is attained
  // at a knot or as a one-sided limit there.
  double best = 0.0;
  for (double x : merged_knots(p, q)) {
    best = std::max(best, std::abs(p.cdf(x) - q.cdf(x)));
    best = std::max(best, std::abs(p.cdf_left(x) - q.cdf_left(x)));
  }
  return clamp01(best);
}

double wasserstein1(const Distribution& p, const Distribution& q) {
  auto x = merged_knots(p, q);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double w = x[i + 1] - x[i];
    const double a = p.cdf(x[i]) - q.cdf(x[i]);
    const double b = p.cdf_left(x[i + 1]) - q.cdf_left(x[i + 1]);
    if (a * b >= 0.0) {
      total += 0.5 * (std::abs(a) + std::abs(b)) * w;
    } else {
      total += 0.5 * (a * a + b * b) / (std::abs(a) + std::abs(b)) * w;
    }
  }
  return total;
}

double concentration(const Distribution& p, double a) {
  require(a >= 0.0, "window length must be >= 0");
  if (p.kind() == Distribution::Kind::kEmpirical) {
    const auto& at = p.atoms();
    std::size_t best = 0, j = 0;
    for (std::size_t i = 0; i < at.size(); ++i) {
      j = std::max(j, i);
      while (j < at.size() && at[j] - at[i] <= a + kWindowSlack) ++j;
      best = std::max(best, j - i);
    }
    return static_cast<double>(best) / static_cast<double>(at.size());
  }
  // x -> P(x + a) - P(x) is piecewise linear with kinks at b and b - a.
  double best = 0.0;
  for (double b : p.breaks()) {
    for (double x : {b, b - a}) best = std::max(best, p.cdf(x + a) - p.cdf(x));
  }
  return clamp01(best);
}

Eigen::VectorXd moment_vector(const Distribution& p, int d) {
  require(d >= 1, "moment order d must be >= 1");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  if (p.kind() == Distribution::Kind::kEmpirical) {
    for (double x : p.atoms()) {
      double xm = 1.0;
      for (int m = 0; m < d; ++m) out[m] += (xm *= x);
    }
    return out / static_cast<double>(p.atoms().size());
  }
  const auto& b = p.breaks();
  const auto& f = p.densities();
  for (std::size_t i = 0; i < f.size(); ++i) {
    double lo = b[i], hi = b[i + 1];
    double plo = lo, phi = hi;  // lo^(m+1), hi^(m+1)
    for (int m = 1; m <= d; ++m) {
      plo *= lo;
      phi *= hi;
      out[m - 1] += f[i] * (phi - plo) / (m + 1);
    }
  }
  return out;
}

}  // namespace fhist
