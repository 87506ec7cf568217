#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "pising/graph.hpp"
#include "pising/ising.hpp"

namespace pising {

// Index over the 2|E| directed edges of a graph. Undirected edge k = {u,v}
// (u < v) owns rows 2k (u->v) and 2k+1 (v->u); the reversal permutation is
// index ^ 1.
class DirectedEdgeIndex {
 public:
  DirectedEdgeIndex() = default;
  explicit DirectedEdgeIndex(const Graph& g);

  int size() const { return 2 * num_edges_; }
  int num_edges() const { return num_edges_; }

  // Row of the directed edge (i,j); throws MissingEdgeError.
  int index_of(const Graph& g, int i, int j) const;

  // Directed edge (i,j) at a row.
  std::pair<int, int> directed(int index) const;

  int reverse(int index) const { return index ^ 1; }

 private:
  int num_edges_ = 0;
  std::vector<VertexPair> edges_;
};

struct KacWardConfig {
  double imag_tol = 1e-6;   // relative residue tolerance on discarded imaginary parts
  double det_tol = 1e-10;   // det(I-W) below this counts as singular
  double theta_clamp = 30;  // |theta| clamp before tanh
};

struct InferenceResult {
  double log_partition = 0;        // nats, includes the n log 2 term
  Eigen::VectorXd edge_moments;    // per graph.edges() order
  std::optional<Eigen::MatrixXd> hessian;  // |E| x |E|, covariance of edge statistics
};

// Directed-edge transition system of a zero-field planar Ising model with a
// straight-line drawing: A holds the half-angle phases exp(i phi/2) for the
// allowed transitions (i,j)->(j,l), D = diag(tanh theta), W = A D. Immutable;
// with_theta shares the angle matrix between parameter settings.
class KacWardSystem {
 public:
  KacWardSystem(const Graph& g, const PlanarEmbedding& emb, std::vector<double> theta,
                KacWardConfig cfg = {});

  KacWardSystem with_theta(std::vector<double> theta) const;

  const Graph& graph() const;
  const DirectedEdgeIndex& index() const;
  const Eigen::MatrixXcd& angle_matrix() const;               // A
  const std::vector<double>& theta() const { return theta_; }
  const Eigen::VectorXd& edge_weights() const { return w_; }  // tanh theta
  Eigen::MatrixXcd transition() const;                        // W = A D
  const KacWardConfig& config() const;

  // Phi(theta) = n log 2 + sum log cosh theta + 1/2 log det(I-W).
  double log_partition() const;

  Eigen::VectorXd edge_moments() const;

  Eigen::MatrixXd hessian() const;

  // One factorization serving logZ, moments and (optionally) the Hessian.
  InferenceResult infer(bool want_hessian) const;

 private:
  struct Shared;  // graph, index, A, config
  std::shared_ptr<const Shared> shared_;
  std::vector<double> theta_;
  Eigen::VectorXd w_;
};

// Builds the system for a zero-field model; throws NonZeroFieldError or
// EmbeddingMismatchError.
KacWardSystem build_kacward(const IsingModel& model, const PlanarEmbedding& emb,
                            KacWardConfig cfg = {});

double log_partition(const KacWardSystem& sys);
Eigen::VectorXd edge_moments(const KacWardSystem& sys);
Eigen::MatrixXd hessian(const KacWardSystem& sys);

struct BruteForceResult {
  double log_partition = 0;
  MomentSet moments;  // all first and pairwise moments
};

// Exact enumeration over all 2^n states (fields allowed). Throws
// TooLargeError for n > 20.
BruteForceResult brute_force_inference(const IsingModel& model);

}  // namespace pising
