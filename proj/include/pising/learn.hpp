#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pising/fit.hpp"
#include "pising/graph.hpp"
#include "pising/ising.hpp"

namespace pising {

enum class LearnMode { zero_field_planar, outer_planar, mixed };

enum class StopRule { maximal, threshold, aic, bic };

struct LearnConfig {
  LearnMode mode = LearnMode::zero_field_planar;
  StopRule stop = StopRule::maximal;
  double gamma = 0;                // total-LL threshold (nats) for StopRule::threshold
  std::optional<int> max_edges;    // default: maximal planar bound of the working graph
  FitConfig fit;
  std::uint64_t seed = 0;          // reserved for randomized tie-breaks; unused
};

struct LearnStep {
  VertexPair edge;
  double bound_gain = 0;     // pairwise-KL lower bound (nats per sample)
  double realized_gain = 0;  // LL improvement after refit (nats per sample)
  double avg_ll = 0;         // cumulative per-sample LL after this step
  int num_edges = 0;
  int newton_iters = 0;
  bool rejected = false;     // stopping edge, excluded from the model
};

struct LearnTrace {
  double initial_avg_ll = 0;  // before the first greedy step
  std::vector<LearnStep> steps;
  std::vector<std::string> warnings;
  bool all_fits_converged = true;
};

struct LearnResult {
  IsingModel model;
  LearnTrace trace;
};

// Model pair correlations for every candidate, computed exactly on augmented
// graphs (zero-theta batch edges, repeated until delta is covered). Batching
// affects grouping only, never values.
std::map<VertexPair, double> candidate_model_moments(const IsingModel& current,
                                                     const PlanarEmbedding& emb,
                                                     const std::vector<VertexPair>& delta,
                                                     const KacWardConfig& cfg = {});

// Pairwise-KL selection bound for every candidate: the likelihood gain of
// adding {i,j} after a refit is at least D(target pair || model pair).
std::map<VertexPair, double> score_candidates(const IsingModel& current,
                                              const PlanarEmbedding& emb,
                                              const MomentSet& targets,
                                              const std::vector<VertexPair>& delta,
                                              const KacWardConfig& cfg = {});

// Greedy planarity-preserving edge selection over zero-field models.
LearnResult greedy_planar_select(const MomentSet& targets, const LearnConfig& cfg);

// Non-zero-mean variant: extends the targets with an auxiliary vertex, seeds
// all auxiliary edges so every node mean is matched, runs the greedy loop on
// the extended graph, and returns the restricted model with fields.
LearnResult learn_outer_planar(const MomentSet& targets, const LearnConfig& cfg);

// As learn_outer_planar but without the seeding step: auxiliary edges compete
// with ordinary pairs, so only some vertices end up with nonzero means.
LearnResult learn_mixed(const MomentSet& targets, const LearnConfig& cfg);

}  // namespace pising
