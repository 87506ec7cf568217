#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "pising/graph.hpp"
#include "pising/ising.hpp"

namespace pising {

struct SampleConfig {
  long num_samples = 0;
  int burn_in = 1000;  // sweeps before the first kept sample
  int thin = 10;       // sweeps before each kept sample
  std::uint64_t seed = 0;
};

// Single-site Gibbs sampling in canonical vertex order. Each sweep draws from
// its own mt19937_64 stream derived from (seed, sweep index), so output is
// bit-identical across platforms for a fixed seed. Returns S x n entries
// in {-1, +1}.
Eigen::MatrixXi gibbs_sample(const IsingModel& model, const SampleConfig& cfg);

enum class ModelKind { grid, outerplanar, random_planar };

struct GenSpec {
  ModelKind kind = ModelKind::grid;
  int rows = 0, cols = 0;  // grid
  int n = 0;               // outerplanar / random_planar
  double lo = -1, hi = 1;  // parameter range
  double min_abs = 0.05;   // rejection threshold on |theta|
  std::uint64_t seed = 0;
};

struct GeneratedModel {
  IsingModel model;
  PlanarEmbedding embedding;  // with coords
};

// Synthetic models: zero-field grid lattice; outer-planar cycle plus random
// non-crossing chords with node fields; random planar triangulation subgraph.
// All parameters drawn uniformly from [lo, hi] with |theta| >= min_abs.
GeneratedModel gen_model(const GenSpec& spec);

}  // namespace pising
