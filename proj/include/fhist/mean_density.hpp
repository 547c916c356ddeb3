#pragma once

#include "fhist/graph.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace fhist {

// Upper-triangle packing of a symmetric k x k matrix: (0,1), (0,2), ..., (k-2,k-1).
inline int pair_index(int i, int j, int k) {
  if (i > j) std::swap(i, j);
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}
Eigen::VectorXd upper_entries(const Eigen::MatrixXd& s);
Eigen::MatrixXd from_upper(const Eigen::VectorXd& v, int k, double diagonal = 0.0);

struct MeanDensityOptions {
  double exact_limit = 1e7;   // largest number of enumerated terms
  long long samples = 250000; // Monte Carlo draws; bounds the standard error by 1e-3
  std::uint64_t seed = 1;
};

struct MeanDensityResult {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
};

// t(S, F): average over injective J : V(F) -> [k] of prod_{uv in E(F)} s_{J(u) J(v)}.
// Cliques enumerate r-subsets; other patterns enumerate injective maps.
MeanDensityResult mean_density_report(const Eigen::MatrixXd& s, const Graph& f,
                                      const MeanDensityOptions& opts = {});
double mean_density(const Eigen::MatrixXd& s, const Graph& f);

// Exact value and gradient with respect to the upper entries s_ij, i < j.
double mean_density_gradient(const Eigen::MatrixXd& s, const Graph& f, Eigen::VectorXd& grad);

// Collision variant: J uniform over all maps V(F) -> [k]; edges inside one
// part use the diagonal entry. Differs from t(S, F) by at most 1 - (k)_r / k^r.
MeanDensityResult mean_density_collision(const Eigen::MatrixXd& s, const Graph& f,
                                         const MeanDensityOptions& opts = {});

}  // namespace fhist
