#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "pising/graph.hpp"
#include "pising/ising.hpp"
#include "pising/kacward.hpp"

namespace pising {

struct FitConfig {
  double grad_tol = 1e-8;        // infinity norm of the moment residual
  int max_iters = 100;
  double armijo_alpha = 0.25;    // in (0, 0.5)
  double backtrack_beta = 0.5;   // in (0, 1)
  int hessian_refresh_every = 1; // iterations between Hessian rebuilds
  std::optional<std::vector<double>> theta_init;  // zeros when absent
  KacWardConfig kacward;
};

struct FitResult {
  std::vector<double> theta;
  double objective = 0;    // mu^T theta - Phi(theta) + n log 2 at the final iterate
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0;    // final infinity norm
  std::vector<double> objective_history;  // value after each accepted step
};

// sum_{ij in E} (mu_ij theta_ij - log cosh theta_ij) - 1/2 log det(I - W(theta)),
// i.e. the per-sample log-likelihood without its -n log 2 constant.
double fit_objective(const Graph& g, const PlanarEmbedding& emb,
                     const std::vector<double>& theta,
                     const std::vector<double>& edge_targets,
                     const KacWardConfig& cfg = {});

// Newton maximization with backtracking line search; targets are the edge
// moments in graph.edges() order, each strictly inside (-1, 1).
FitResult fit_parameters(const Graph& g, const PlanarEmbedding& emb,
                         const std::vector<double>& edge_targets,
                         const FitConfig& cfg = {});

// Per-sample average log-likelihood of data with the given moments under the
// model (nats). Extended models are scored on the original variables; models
// with explicit fields are routed through the zero-field extension (or brute
// force when the extension is not planar and n <= 20).
double average_log_likelihood(const IsingModel& model, const MomentSet& data_moments);

double average_log_likelihood(const IsingModel& model, const Eigen::MatrixXi& samples);

}  // namespace pising
