#include "pising/fit.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace pising {

namespace {

void check_targets(const Graph& g, const std::vector<double>& targets) {
  if (static_cast<int>(targets.size()) != g.num_edges())
    throw BadDimsError("target count does not match edge count");
  for (double t : targets) {
    if (!std::isfinite(t) || std::abs(t) >= 1)
      throw InvalidTargetsError("edge targets must lie strictly inside (-1, 1)");
  }
}

double objective_at(const KacWardSystem& sys, const std::vector<double>& targets) {
  double dot = 0;
  const auto& theta = sys.theta();
  for (std::size_t k = 0; k < theta.size(); ++k) dot += targets[k] * theta[k];
  return dot - sys.log_partition() +
         sys.graph().num_vertices() * std::numbers::ln2;
}

// Newton ascent direction for the residual, with a growing diagonal shift when
// the Hessian solve fails or the direction is not an ascent direction.
Eigen::VectorXd ascent_direction(const Eigen::MatrixXd& h, const Eigen::VectorXd& grad) {
  const int ne = static_cast<int>(grad.size());
  double shift = 0;
  for (int attempt = 0; attempt < 40; ++attempt) {
    Eigen::MatrixXd shifted = h;
    if (shift > 0) shifted.diagonal().array() += shift;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
    if (ldlt.info() == Eigen::Success) {
      Eigen::VectorXd d = ldlt.solve(grad);
      if (d.allFinite() && grad.dot(d) > 0) return d;
    }
    shift = (shift == 0) ? 1e-8 : shift * 10;
    if (shift > 1e12) break;
  }
  return grad;  // steepest ascent fallback
}

double energy_dot(const IsingModel& model, const MomentSet& data) {
  double e = 0;
  const auto& edges = model.graph.edges();
  for (int k = 0; k < model.graph.num_edges(); ++k)
    e += model.theta_edges[k] * data.pair(edges[k].first, edges[k].second);
  for (int i = 0; i < model.graph.num_vertices(); ++i)
    e += model.theta_nodes[i] * data.first[i];
  return e;
}

// log Z over the model's own variables, routed through the planar machinery
// when possible and brute force otherwise.
double model_log_partition(const IsingModel& model) {
  if (model.zero_field()) {
    if (is_planar(model.graph)) {
      PlanarEmbedding emb = straight_line_drawing(model.graph);
      return build_kacward(model, emb).log_partition();
    }
    if (model.graph.num_vertices() <= 20) return brute_force_inference(model).log_partition;
    throw NonPlanarError("model graph is not planar and too large for enumeration");
  }
  IsingModel ext = extend_zero_field(model);
  if (is_planar(ext.graph)) {
    PlanarEmbedding emb = straight_line_drawing(ext.graph);
    return build_kacward(ext, emb).log_partition() - std::numbers::ln2;
  }
  if (model.graph.num_vertices() <= 20) return brute_force_inference(model).log_partition;
  throw NonPlanarError("zero-field extension is not planar and model too large for enumeration");
}

}  // namespace

double fit_objective(const Graph& g, const PlanarEmbedding& emb,
                     const std::vector<double>& theta,
                     const std::vector<double>& edge_targets, const KacWardConfig& cfg) {
  if (static_cast<int>(edge_targets.size()) != g.num_edges())
    throw BadDimsError("target count does not match edge count");
  KacWardSystem sys(g, emb, theta, cfg);
  return objective_at(sys, edge_targets);
}

FitResult fit_parameters(const Graph& g, const PlanarEmbedding& emb,
                         const std::vector<double>& edge_targets, const FitConfig& cfg) {
  check_targets(g, edge_targets);
  const int ne = g.num_edges();

  std::vector<double> theta(ne, 0.0);
  if (cfg.theta_init) {
    if (static_cast<int>(cfg.theta_init->size()) != ne)
      throw BadDimsError("theta_init size does not match edge count");
    theta = *cfg.theta_init;
  }

  FitResult result;
  if (ne == 0) {
    result.theta = theta;
    result.converged = true;
    return result;
  }

  Eigen::VectorXd mu_target(ne);
  for (int k = 0; k < ne; ++k) mu_target[k] = edge_targets[k];

  KacWardSystem sys(g, emb, theta, cfg.kacward);
  InferenceResult state = sys.infer(true);
  Eigen::MatrixXd hess = *state.hessian;
  double f = objective_at(sys, edge_targets);

  Eigen::VectorXd grad = mu_target - state.edge_moments;
  result.grad_norm = grad.lpNorm<Eigen::Infinity>();

  const int refresh = std::max(1, cfg.hessian_refresh_every);
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (result.grad_norm <= cfg.grad_tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd dir = ascent_direction(hess, grad);
    double slope = grad.dot(dir);

    double step = 1.0;
    bool accepted = false;
    std::vector<double> trial(ne);
    KacWardSystem trial_sys = sys;
    double trial_f = f;
    while (step >= 1e-14) {
      for (int k = 0; k < ne; ++k) trial[k] = theta[k] + step * dir[k];
      bool ok = true;
      try {
        trial_sys = sys.with_theta(trial);
        trial_f = objective_at(trial_sys, edge_targets);
      } catch (const NumericalError&) {
        ok = false;
      }
      if (ok && std::isfinite(trial_f) &&
          trial_f >= f + cfg.armijo_alpha * step * slope) {
        accepted = true;
        break;
      }
      step *= cfg.backtrack_beta;
    }
    if (!accepted) break;  // no productive step left at this scale

    theta = trial;
    sys = trial_sys;
    f = trial_f;
    ++result.iterations;
    result.objective_history.push_back(f);

    bool want_hessian = (result.iterations % refresh) == 0;
    state = sys.infer(want_hessian);
    if (state.hessian) hess = *state.hessian;
    grad = mu_target - state.edge_moments;
    result.grad_norm = grad.lpNorm<Eigen::Infinity>();
  }
  if (result.grad_norm <= cfg.grad_tol) result.converged = true;

  result.theta = theta;
  result.objective = f;
  return result;
}

double average_log_likelihood(const IsingModel& model, const MomentSet& data_moments) {
  model.check_consistent();
  if (model.aux_vertex) {
    IsingModel base = restrict_extended(model);
    if (data_moments.n != base.graph.num_vertices())
      throw BadDimsError("moment set does not match original variable count");
    double log_z;
    if (is_planar(model.graph)) {
      PlanarEmbedding emb = straight_line_drawing(model.graph);
      log_z = build_kacward(model, emb).log_partition() - std::numbers::ln2;
    } else {
      log_z = model_log_partition(base);
    }
    return energy_dot(base, data_moments) - log_z;
  }
  if (data_moments.n != model.graph.num_vertices())
    throw BadDimsError("moment set does not match variable count");
  return energy_dot(model, data_moments) - model_log_partition(model);
}

double average_log_likelihood(const IsingModel& model, const Eigen::MatrixXi& samples) {
  return average_log_likelihood(model, empirical_moments(samples));
}

}  // namespace pising
