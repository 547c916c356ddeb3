#pragma once

#include "fhist/bigint.hpp"
#include "fhist/distribution.hpp"
#include "fhist/pattern.hpp"

#include <Eigen/Core>

#include <vector>

namespace fhist {

// How c_m pairs n * b^m against the copies of F^m in K_n.
//
// kRootedInjection compares rooted injections on both sides, so that
// phi_m = c_m E X^m tracks t(G, F^m) up to O(1/n); it gives c_m = 1.
// kPrintedRatio is the ratio n b^m / (a_m c_{F^m,n} m!) taken literally,
// which gives c_m = 1 / (root_aut^m m!) (1 and 1/2 for the rooted edge).
enum class CopyNormalization { kRootedInjection, kPrintedRatio };

inline constexpr double kEsseenConstant = 51.0;

// Exact c_1..c_d from the leading coefficients of the two polynomials in n.
std::vector<Rational> c_coefficients_exact(const RootedPattern& f, int d,
                                           CopyNormalization norm = CopyNormalization::kRootedInjection);
Eigen::VectorXd c_coefficients(const RootedPattern& f, int d,
                               CopyNormalization norm = CopyNormalization::kRootedInjection);

struct MomentReport {
  int d = 0;
  Eigen::VectorXd moments;
  Eigen::VectorXd c_coeffs;
  Eigen::VectorXd phi;
};
MomentReport phi_vector(const Distribution& p, const RootedPattern& f, int d,
                        CopyNormalization norm = CopyNormalization::kRootedInjection);

// min(1, c (S_p(1/T) + e^T (gamma + T^(d+1) / (d! d)))), unclipped when clip = false.
double ks_upper_bound(const Distribution& p, double gamma, int d, double T,
                      double c = kEsseenConstant, bool clip = true);

struct KsBoundArgmin {
  double T = 0.0;
  double value = 1.0;
};
// Minimizes the bound over a log grid of T in (1, t_max].
KsBoundArgmin ks_upper_bound_argmin(const Distribution& p, double gamma, int d,
                                    double c = kEsseenConstant, double t_max = 700.0);

// Outer radii gamma_m = (2 m c_m / a) E X^m delta, a = density_min(p).
Eigen::VectorXd gamma_radii(const Distribution& p, const RootedPattern& f, int d, double delta,
                            CopyNormalization norm = CopyNormalization::kRootedInjection);
// Finite-n additive slack `constant * max(c_m) / n`.
double finite_n_slack(const Eigen::VectorXd& c, long long n, double constant = 10.0);

struct BetaRadii {
  Eigen::VectorXd beta;  // zero when infeasible
  double T = 0.0;
  double objective = 0.0;  // bracket value at T before scaling by c_m
  bool feasible = false;
};
// beta_m = c_m (e^-T (delta / c - S_p(1/T)) - T^(d+1) / (d! d)), maximized over T.
BetaRadii beta_radii(const Distribution& p, const RootedPattern& f, int d, double delta,
                     CopyNormalization norm = CopyNormalization::kRootedInjection,
                     double c = kEsseenConstant);

struct SandwichRadii {
  double delta = 0.0;
  Eigen::VectorXd gamma;
  double slack = 0.0;
  BetaRadii beta;
};
SandwichRadii sandwich_radii(const Distribution& p, const RootedPattern& f, int d, double delta,
                             long long n, CopyNormalization norm = CopyNormalization::kRootedInjection,
                             double slack_constant = 10.0);

// Both directions of the moment / KS comparison for one pair.
struct MomentKsAudit {
  double ks = 0.0;
  double w1 = 0.0;
  Eigen::VectorXd moment_gaps;  // |E X^m - E Y^m|
  double max_gap = 0.0;
  bool gaps_within_ks = true;   // every gap <= ks
  bool gaps_within_w1 = true;   // every gap / m <= w1
  double ks_bound = 1.0;        // best KS bound from gamma = max_gap
  double ks_bound_T = 0.0;
  bool ks_within_bound = true;
};
MomentKsAudit ks_implies_moments_close(const Distribution& p, const Distribution& q, int d);
MomentKsAudit moments_close_implies_ks(const Distribution& p, const Distribution& q, int d);

}  // namespace fhist
