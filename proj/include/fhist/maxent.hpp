#pragma once

#include "fhist/distribution.hpp"
#include "fhist/graph.hpp"
#include "fhist/pattern.hpp"
#include "fhist/radii.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fhist {

// Binary entropy in nats; h(0) = h(1) = 0.
double binary_entropy(double x);

struct EntropyValue {
  double H = 0.0;         // sum over i < j of h(s_ij)
  double per_edge = 0.0;  // H / k^2
};
EntropyValue entropy(const Eigen::MatrixXd& s);

// L1 norm over the upper triangle.
double upper_l1(const Eigen::MatrixXd& s);

struct ConstraintSpec {
  std::vector<Graph> family;
  Eigen::VectorXd phi;
  Eigen::VectorXd gamma;  // used as given by the solver
  int k = 2;
  double eps = 0.0;       // 0 disables the counting-lemma slack
  int r_bar = 0;

  static ConstraintSpec make(std::vector<Graph> family, Eigen::VectorXd phi, Eigen::VectorXd gamma, int k,
                             double eps = 0.0);
  // 5 eps^(1/r_bar), or 0 when eps = 0.
  double counting_slack() const;
  // The same constraints with gamma widened by counting_slack().
  ConstraintSpec widened() const;
};

struct SolverOptions {
  int starts = 16;
  std::uint64_t seed = 7;
  int outer_iterations = 60;
  int inner_iterations = 3000;
  double feasibility_tolerance = 1e-6;  // allowed excess over gamma
  double inner_tolerance = 1e-10;
};

struct StartLog {
  std::string kind;  // "half", "constant", "random"
  double entropy = 0.0;
  double max_excess = 0.0;  // max_m (|t_m - phi_m| - gamma_m)
  bool converged = false;
};

struct MaxEntSolution {
  Eigen::MatrixXd S;
  double entropy = 0.0;
  double per_edge_entropy = 0.0;
  Eigen::VectorXd densities;
  Eigen::VectorXd residuals;  // |t(S, F_m) - phi_m|
  bool feasible = false;
  bool converged = false;
  int best_start = -1;
  std::vector<StartLog> starts;
};

// Maximizes H(S) subject to |t(S, F_m) - phi_m| <= gamma_m by an augmented
// Lagrangian with a spectral projected-gradient inner loop, from several starts.
MaxEntSolution solve_max_entropy(const ConstraintSpec& spec, const SolverOptions& opts = {});

struct JacobianReport {
  Eigen::MatrixXd J;  // C(k,2) x d
  double sigma_min = 0.0;
  Eigen::VectorXd densities;
};
JacobianReport density_jacobian(const Eigen::MatrixXd& s, const std::vector<Graph>& family);
// Smallest singular value of J, zero when J has fewer rows than columns.
double smallest_singular_value(const Eigen::MatrixXd& j);

struct RadiusOptions {
  int samples = 256;
  int descent_steps = 8;
  std::uint64_t seed = 11;
  double sigma_scale = 1.0;  // multiplies every sigma estimate
};

struct EffectiveRadius {
  double rho = 0.0;
  double sigma_hat = 0.0;  // estimate at rho
  double target = 0.0;     // 10 d eps^(1/r_bar)
  bool sentinel = false;   // no radius found; rho = C(k,2)
  std::string annotation;
};
EffectiveRadius effective_radius(const Eigen::MatrixXd& s, const std::vector<Graph>& family, double eps, int d,
                                 const RadiusOptions& opts = {});

struct ScalarShift {
  Eigen::MatrixXd S_bar;
  double alpha = 0.0;
  double start_density = 0.0;
  double achieved = 0.0;
  double l1_move = 0.0;
  double bound = 0.0;            // (|phi - phi'| / (1 - min(phi, phi')))^(1/C(r,2)) C(k,2)
  double downward_bound = 0.0;   // ((phi - phi') / phi)^(1/C(r,2)) C(k,2), downward moves only
  bool upward = true;
  bool within_bound = true;
};
// Moves S along S + a(1 - S) (upward) or S(1 - a) (downward) until t(S_bar, F) = phi'.
ScalarShift scalar_shift(const Eigen::MatrixXd& s, const Graph& f, double phi_prime, double tolerance = 1e-8);

struct ContinuityCheck {
  double bound = 0.0;  // 5 h(||S1 - S2||_1 / (4 k^2))
  double entropy_gap = 0.0;  // H(S2) - H(S1)
  double entropy_cap = 0.0;  // 5 k^2 h(||S1 - S2||_1 / (4 k^2))
  bool holds = true;
};
ContinuityCheck continuity_bound(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2);

struct CombinatorialBounds {
  double log_type_count = 0.0;            // k^2 log(n^2 / k^2 + 1)
  double type_count_per_edge = 0.0;       // log_type_count / n^2
  double eight_k_over_n = 0.0;
  double class_size_upper = 0.0;          // H / k^2 + 2 eps
  std::optional<double> class_size_lower; // empty when the estimate is vacuous
  double lower_correction = 0.0;          // class_size_lower - H / k^2
};
CombinatorialBounds combinatorial_bounds(long long n, int k, double eps, const Eigen::MatrixXd& s);

struct SizeBoundsReport {
  std::string target;  // "densities" or "hist"
  std::optional<double> lower;
  double upper = 0.0;
  double upper_center = 0.0;
  std::optional<double> lower_center;
  std::map<std::string, double> slack_terms;
  bool o_eps_flag = true;  // an unquantified o_eps(1) term remains in both directions
  std::optional<double> scalar_constant;
  std::vector<std::string> notes;
  std::optional<MaxEntSolution> upper_solution, lower_solution;
  std::optional<EffectiveRadius> upper_radius, lower_radius;
};

SizeBoundsReport densities_size_bounds(const ConstraintSpec& spec, long long n, const SolverOptions& solver = {},
                                       const RadiusOptions& radius = {});

struct HistBoundsOptions {
  CopyNormalization norm = CopyNormalization::kRootedInjection;
  double slack_constant = 10.0;
  SolverOptions solver;
  RadiusOptions radius;
};
SizeBoundsReport hist_size_bounds(const Distribution& p, const RootedPattern& f, double delta, int d, int k,
                                  double eps, long long n, const HistBoundsOptions& opts = {});

}  // namespace fhist
