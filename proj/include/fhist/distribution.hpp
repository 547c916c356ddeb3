#pragma once

#include <Eigen/Core>

#include <vector>

namespace fhist {

// Probability distribution on [0,1]: either a piecewise-constant density or
// an empirical measure with equal-mass atoms.
class Distribution {
 public:
  enum class Kind { kPiecewise, kEmpirical };

  static Distribution piecewise(std::vector<double> breaks, std::vector<double> densities);
  static Distribution empirical(std::vector<double> atoms);
  static Distribution uniform() { return piecewise({0.0, 1.0}, {1.0}); }
  static Distribution point_mass(double at) { return empirical({at}); }

  Kind kind() const { return kind_; }
  bool is_piecewise() const { return kind_ == Kind::kPiecewise; }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& densities() const { return densities_; }
  const std::vector<double>& atoms() const { return atoms_; }

  // Extremes of the density over [0,1]; zero when the bins leave a gap.
  // Empirical distributions report 0 and +inf.
  double density_min() const { return density_min_; }
  double density_max() const { return density_max_; }

  double cdf(double x) const;       // P(X <= x)
  double cdf_left(double x) const;  // P(X < x)
  // Points where either CDF branch can change slope or jump.
  std::vector<double> knots() const;

 private:
  Kind kind_ = Kind::kEmpirical;
  std::vector<double> breaks_, densities_, atoms_;
  double density_min_ = 0.0, density_max_ = 0.0;
};

double ks_distance(const Distribution& p, const Distribution& q);
double wasserstein1(const Distribution& p, const Distribution& q);
// sup_x p([x, x + a]).
double concentration(const Distribution& p, double a);
// E X^m for m = 1..d (entry m-1).
Eigen::VectorXd moment_vector(const Distribution& p, int d);

}  // namespace fhist
