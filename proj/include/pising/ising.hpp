#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "pising/graph.hpp"

namespace pising {

// Ising model over ±1 spins: node parameters theta_nodes (nats, all zero in
// zero-field mode) and per-edge couplings theta_edges aligned with
// graph.edges(). aux_vertex marks the auxiliary node of an extended
// (originally non-zero-field) model.
struct IsingModel {
  Graph graph;
  std::vector<double> theta_edges;
  std::vector<double> theta_nodes;
  std::optional<int> aux_vertex;

  IsingModel() = default;
  explicit IsingModel(Graph g);
  IsingModel(Graph g, std::vector<double> edge_theta, std::vector<double> node_theta = {});

  bool zero_field() const;
  void check_consistent() const;
};

// First and pairwise moments over all vertex pairs. second is a symmetric
// n x n matrix with unit diagonal.
struct MomentSet {
  int n = 0;
  Eigen::VectorXd first;
  Eigen::MatrixXd second;
  std::optional<long> sample_count;

  MomentSet() = default;
  explicit MomentSet(int n_vertices);

  double pair(int i, int j) const { return second(i, j); }
  void set_pair(int i, int j, double mu);
};

// Pairwise binary graphical model in the log domain: node potentials
// f_i(x_i) and edge potentials f_ij(x_i, x_j) with index 0 <-> x = -1 and
// index 1 <-> x = +1.
struct PairwiseModel {
  Graph graph;
  std::vector<std::array<double, 2>> node_potentials;
  std::vector<std::array<std::array<double, 2>, 2>> edge_potentials;
};

// Joint distribution of one spin pair; p(a, b) with the same 0 <-> -1,
// 1 <-> +1 index convention.
struct PairTable {
  std::array<std::array<double, 2>, 2> p{};

  double operator()(int xi, int xj) const {  // xi, xj in {-1, +1}
    return p[xi > 0][xj > 0];
  }
};

// Ising parameters defining the same distribution as pm.
IsingModel pairwise_to_ising(const PairwiseModel& pm);

// P(x_i, x_j) from the moment triple; throws NotRealizableError when an
// entry falls below -1e-12 (entries within tolerance are clamped to zero).
PairTable moments_to_marginals(double mu_i, double mu_j, double mu_ij);

// Sample moments of an S x n matrix of ±1 entries.
MomentSet empirical_moments(const Eigen::MatrixXi& samples);

// Zero-field extension: one auxiliary vertex (id n) absorbs the node fields
// as edges theta_{i,aux} = theta_i (zero fields omitted).
IsingModel extend_zero_field(const IsingModel& m);

// Inverse relabeling of the extension, for parameters ...
IsingModel restrict_extended(const IsingModel& extended);

// ... and for moment sets: mu_{i,aux} becomes the first moment of i.
MomentSet restrict_extended_moments(const MomentSet& extended, int aux_vertex);

// Zero-mean extension of a moment set (pair (i,aux) carries mu_i).
MomentSet extend_moments(const MomentSet& moments);

// KL divergence (nats) between the pair tables of two moment triples,
// with 0 log 0 = 0. Throws InfiniteDivergenceError when the target has mass
// where the model has none.
double pair_divergence(double t_i, double t_j, double t_ij,
                       double m_i, double m_j, double m_ij);

// Clamp all pair moments to |mu| <= 1 - 1e-6 so the MLE stays finite.
MomentSet clamp_moments(const MomentSet& moments, double max_abs = 1.0 - 1e-6);

}  // namespace pising
