#include "pising/learn.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace pising {

namespace {

double avg_ll_from_objective(double objective, int n_original) {
  return objective - n_original * std::numbers::ln2;
}

std::vector<double> edge_targets_for(const Graph& g, const MomentSet& targets) {
  std::vector<double> out;
  out.reserve(g.num_edges());
  for (const auto& [u, v] : g.edges()) out.push_back(targets.pair(u, v));
  return out;
}

struct StopPolicy {
  StopRule rule;
  double penalty = 0;  // total-LL nats an accepted edge must beat
  double scale = 1;    // sample count multiplying the per-sample gain

  bool rejects(double realized_gain) const {
    if (rule == StopRule::maximal) return false;
    return realized_gain * scale < penalty;
  }
};

StopPolicy make_stop_policy(const LearnConfig& cfg, const MomentSet& targets) {
  StopPolicy p{cfg.stop};
  switch (cfg.stop) {
    case StopRule::maximal:
      break;
    case StopRule::threshold:
      p.penalty = cfg.gamma;
      p.scale = static_cast<double>(targets.sample_count.value_or(1));
      break;
    case StopRule::aic:
    case StopRule::bic: {
      if (!targets.sample_count)
        throw BadValueError("aic/bic stopping needs a sample count on the targets");
      p.scale = static_cast<double>(*targets.sample_count);
      p.penalty = (cfg.stop == StopRule::aic) ? 1.0 : 0.5 * std::log(p.scale);
      break;
    }
  }
  return p;
}

// Greedy loop shared by every mode. `current` is a zero-field working model
// (possibly with an auxiliary vertex), `work` its matching moment set, and
// `n_original` the variable count the reported likelihoods refer to.
void run_greedy(IsingModel& current, const MomentSet& work, int n_original,
                const LearnConfig& cfg, LearnTrace& trace, double& avg_ll) {
  const int budget = cfg.max_edges.value_or(INT_MAX);
  int accepted = 0;

  while (accepted < budget) {
    std::vector<VertexPair> delta = candidate_edges(current.graph);
    if (delta.empty()) break;

    PlanarEmbedding emb = straight_line_drawing(current.graph);
    std::map<VertexPair, double> scores =
        score_candidates(current, emb, work, delta, cfg.fit.kacward);

    // Symmetric targets make candidates mathematically tied, but the batched
    // solves perturb such ties at the ~1e-11 relative level. Anything within
    // rounding distance of the maximum counts as a tie and goes to the
    // canonical-first pair.
    double top = 0;
    for (const auto& pair : delta) top = std::max(top, scores.at(pair));
    VertexPair best = delta.front();
    for (const auto& pair : delta) {  // canonical order
      if (scores.at(pair) >= top - 1e-9 * top) {
        best = pair;
        break;
      }
    }
    const double best_score = scores.at(best);

    Graph g_new = current.graph.with_edge(best.first, best.second);
    PlanarEmbedding emb_new = straight_line_drawing(g_new);
    FitConfig fit_cfg = cfg.fit;
    std::vector<double> warm = current.theta_edges;
    warm.push_back(0.0);
    fit_cfg.theta_init = warm;

    FitResult fit = fit_parameters(g_new, emb_new, edge_targets_for(g_new, work), fit_cfg);
    if (!fit.converged) {
      trace.all_fits_converged = false;
      std::ostringstream msg;
      msg << "fit after adding (" << best.first << "," << best.second
          << ") stopped at grad norm " << fit.grad_norm;
      trace.warnings.push_back(msg.str());
    }

    double trial_avg_ll = avg_ll_from_objective(fit.objective, n_original);
    double realized = trial_avg_ll - avg_ll;

    StopPolicy stop = make_stop_policy(cfg, work);
    LearnStep step;
    step.edge = best;
    step.bound_gain = best_score;
    step.realized_gain = realized;
    step.avg_ll = trial_avg_ll;
    step.newton_iters = fit.iterations;

    if (stop.rejects(realized)) {
      step.rejected = true;
      step.num_edges = g_new.num_edges();
      trace.steps.push_back(step);
      break;
    }

    current = IsingModel(g_new, fit.theta,
                         std::vector<double>(g_new.num_vertices(), 0.0));
    current.aux_vertex = std::nullopt;  // caller restores the marker
    avg_ll = trial_avg_ll;
    step.num_edges = g_new.num_edges();
    trace.steps.push_back(step);
    ++accepted;
  }
}

}  // namespace

std::map<VertexPair, double> candidate_model_moments(const IsingModel& current,
                                                     const PlanarEmbedding& emb,
                                                     const std::vector<VertexPair>& delta,
                                                     const KacWardConfig& cfg) {
  (void)emb;  // augmented graphs get fresh drawings
  if (!current.zero_field())
    throw NonZeroFieldError("candidate scoring works on zero-field working models");
  const int n = current.graph.num_vertices();

  std::set<VertexPair> remaining;
  for (auto [u, v] : delta) {
    auto pair = make_vertex_pair(u, v);
    if (pair.first < 0 || pair.second >= n || pair.first == pair.second)
      throw BadValueError("candidate pair out of range");
    if (current.graph.has_edge(pair.first, pair.second))
      throw BadValueError("candidate pair is already an edge");
    remaining.insert(pair);
  }

  std::map<VertexPair, double> out;
  while (!remaining.empty()) {
    std::vector<VertexPair> pool(remaining.begin(), remaining.end());
    std::vector<VertexPair> batch = greedy_planar_augmentation(current.graph, pool);
    if (batch.empty())
      throw NonPlanarError("candidate edge cannot be added while staying planar");

    Graph g_aug = current.graph;
    std::vector<double> theta_aug = current.theta_edges;
    for (auto [u, v] : batch) {
      g_aug.add_edge(u, v);
      theta_aug.push_back(0.0);
    }
    PlanarEmbedding emb_aug = straight_line_drawing(g_aug);
    KacWardSystem sys(g_aug, emb_aug, theta_aug, cfg);
    Eigen::VectorXd mu = sys.edge_moments();
    for (auto pair : batch) {
      out[pair] = mu[g_aug.edge_index(pair.first, pair.second)];
      remaining.erase(pair);
    }
  }
  return out;
}

std::map<VertexPair, double> score_candidates(const IsingModel& current,
                                              const PlanarEmbedding& emb,
                                              const MomentSet& targets,
                                              const std::vector<VertexPair>& delta,
                                              const KacWardConfig& cfg) {
  if (targets.n != current.graph.num_vertices())
    throw BadDimsError("target moments do not match the working graph");
  std::map<VertexPair, double> model_mu = candidate_model_moments(current, emb, delta, cfg);
  std::map<VertexPair, double> out;
  for (const auto& [pair, mu] : model_mu) {
    auto [i, j] = pair;
    out[pair] = pair_divergence(targets.first[i], targets.first[j], targets.pair(i, j),
                                0.0, 0.0, mu);
  }
  return out;
}

LearnResult greedy_planar_select(const MomentSet& targets, const LearnConfig& cfg) {
  if (targets.n < 1) throw BadValueError("need at least one variable");
  MomentSet work = clamp_moments(targets);
  make_stop_policy(cfg, work);  // validate stop inputs up front

  const int n = work.n;
  IsingModel current(Graph(n), {}, std::vector<double>(n, 0.0));
  LearnTrace trace;
  for (int i = 0; i < n; ++i) {
    if (std::abs(work.first[i]) > 1e-6) {
      trace.warnings.push_back(
          "zero-field mode: nonzero first moments are not matched by the model");
      break;
    }
  }
  double avg_ll = -n * std::numbers::ln2;
  trace.initial_avg_ll = avg_ll;

  run_greedy(current, work, n, cfg, trace, avg_ll);
  return LearnResult{std::move(current), std::move(trace)};
}

LearnResult learn_outer_planar(const MomentSet& targets, const LearnConfig& cfg) {
  if (targets.n < 1) throw BadValueError("need at least one variable");
  MomentSet work = clamp_moments(extend_moments(targets));
  make_stop_policy(cfg, work);

  const int n = targets.n;
  const int aux = n;
  Graph star(n + 1);
  for (int i = 0; i < n; ++i) star.add_edge(i, aux);

  PlanarEmbedding emb = straight_line_drawing(star);
  FitResult seed = fit_parameters(star, emb, edge_targets_for(star, work), cfg.fit);

  IsingModel current(star, seed.theta, std::vector<double>(n + 1, 0.0));
  LearnTrace trace;
  if (!seed.converged) {
    trace.all_fits_converged = false;
    trace.warnings.push_back("mean-matching seed fit did not converge");
  }
  double avg_ll = avg_ll_from_objective(seed.objective, n);
  trace.initial_avg_ll = avg_ll;

  run_greedy(current, work, n, cfg, trace, avg_ll);

  current.aux_vertex = aux;
  IsingModel restricted = restrict_extended(current);
  return LearnResult{std::move(restricted), std::move(trace)};
}

LearnResult learn_mixed(const MomentSet& targets, const LearnConfig& cfg) {
  if (targets.n < 1) throw BadValueError("need at least one variable");
  MomentSet work = clamp_moments(extend_moments(targets));
  make_stop_policy(cfg, work);

  const int n = targets.n;
  const int aux = n;
  IsingModel current(Graph(n + 1), {}, std::vector<double>(n + 1, 0.0));
  LearnTrace trace;
  double avg_ll = -n * std::numbers::ln2;
  trace.initial_avg_ll = avg_ll;

  run_greedy(current, work, n, cfg, trace, avg_ll);

  current.aux_vertex = aux;
  IsingModel restricted = restrict_extended(current);
  return LearnResult{std::move(restricted), std::move(trace)};
}

}  // namespace pising
