#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pising/graph.hpp"
#include "pising/ising.hpp"
#include "pising/learn.hpp"

namespace pising {

// Model JSON schema:
//   {"n": int, "mode": "zero_field"|"field", "edges": [{"u","v","theta"}],
//    "fields": [theta_i]?, "aux_vertex": int?, "positions": [[x,y]]?}
std::string model_to_json(const IsingModel& model,
                          const PlanarEmbedding* emb = nullptr);
struct LoadedModel {
  IsingModel model;
  std::optional<PlanarEmbedding> embedding;  // from "positions", coords only
};
LoadedModel model_from_json(const std::string& text);

void save_model(const std::string& path, const IsingModel& model,
                const PlanarEmbedding* emb = nullptr);
LoadedModel load_model(const std::string& path);

// Samples CSV: header of vertex names (v0,v1,...), one ±1 row per sample.
// zero_one remaps {0,1} -> {-1,+1} at ingestion.
void write_samples_csv(std::ostream& out, const Eigen::MatrixXi& samples);
void save_samples(const std::string& path, const Eigen::MatrixXi& samples);
Eigen::MatrixXi load_samples(const std::string& path, bool zero_one = false);

// Moments CSV: "i,j,mu" rows plus optional "i,mu" first-moment rows;
// '#' lines are comments, except "# sample_count=S" which sets S.
void save_moments(const std::string& path, const MomentSet& moments);
MomentSet load_moments(const std::string& path, int n_hint = 0);

// Trace CSV: step,u,v,bound_gain,realized_gain,avg_ll,num_edges,newton_iters,rejected.
void write_trace_csv(std::ostream& out, const LearnTrace& trace);
void save_trace(const std::string& path, const LearnTrace& trace);

// Graphviz DOT with theta edge attributes (6 decimals) and pos attributes
// when a drawing is available. Byte-deterministic for fixed input.
std::string model_to_dot(const IsingModel& model,
                         const PlanarEmbedding* emb = nullptr);

// Manifest sidecar written next to every CLI output (path + ".manifest.json").
struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> flags;  // resolved values
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double wall_clock_sec = 0;
  std::string version;
  std::vector<std::string> notes;
};
std::string manifest_to_json(const RunManifest& m);
void save_manifest(const std::string& output_path, const RunManifest& m);

}  // namespace pising
