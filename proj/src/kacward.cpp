#include "pising/kacward.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>

namespace pising {

namespace {

constexpr double kPi = std::numbers::pi;

double log_cosh(double x) {
  double a = std::abs(x);
  return a + std::log1p(std::exp(-2 * a)) - std::numbers::ln2;
}

double wrap_to_pi(double a) {
  while (a > kPi) a -= 2 * kPi;
  while (a <= -kPi) a += 2 * kPi;
  return a;
}

struct LogDet {
  double re = 0;
  double im_wrapped = 0;  // residue in (-pi, pi]; ~pi means a negative determinant
  bool singular = false;
};

LogDet complex_log_det(const Eigen::MatrixXcd& m) {
  LogDet out;
  if (m.rows() == 0) return out;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  double im = 0;
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    std::complex<double> d = lu.matrixLU()(k, k);
    if (d == std::complex<double>(0, 0)) {
      out.singular = true;
      return out;
    }
    out.re += std::log(std::abs(d));
    im += std::arg(d);
  }
  if (lu.permutationP().determinant() < 0) im += kPi;
  out.im_wrapped = wrap_to_pi(im);
  return out;
}

}  // namespace

DirectedEdgeIndex::DirectedEdgeIndex(const Graph& g)
    : num_edges_(g.num_edges()), edges_(g.edges()) {}

int DirectedEdgeIndex::index_of(const Graph& g, int i, int j) const {
  int k = g.edge_index(i, j);
  if (k < 0) throw MissingEdgeError("directed edge over a missing graph edge");
  return i < j ? 2 * k : 2 * k + 1;
}

std::pair<int, int> DirectedEdgeIndex::directed(int index) const {
  auto [u, v] = edges_[index / 2];
  return (index % 2 == 0) ? std::pair{u, v} : std::pair{v, u};
}

struct KacWardSystem::Shared {
  Graph graph;
  DirectedEdgeIndex index;
  Eigen::MatrixXcd angles;  // A
  KacWardConfig cfg;
  // Fast (i,j) -> row lookup.
  std::map<std::pair<int, int>, int> row;

  int row_of(int i, int j) const { return row.at({i, j}); }
};

KacWardSystem::KacWardSystem(const Graph& g, const PlanarEmbedding& emb,
                             std::vector<double> theta, KacWardConfig cfg) {
  if (static_cast<int>(theta.size()) != g.num_edges())
    throw BadValueError("theta size does not match edge count");
  if (g.num_edges() > 0 && !emb.has_coords())
    throw EmbeddingMismatchError("embedding has no coordinates");
  if (emb.has_coords() && static_cast<int>(emb.coords.size()) != g.num_vertices())
    throw EmbeddingMismatchError("embedding size does not match vertex count");

  auto shared = std::make_shared<Shared>();
  shared->graph = g;
  shared->index = DirectedEdgeIndex(g);
  shared->cfg = cfg;

  const int m = shared->index.size();
  for (int a = 0; a < m; ++a) shared->row.emplace(shared->index.directed(a), a);

  shared->angles = Eigen::MatrixXcd::Zero(m, m);
  const std::complex<double> half_i(0, 0.5);
  for (int j = 0; j < g.num_vertices(); ++j) {
    for (int i : g.neighbors(j)) {
      int from = shared->row_of(i, j);
      for (int l : g.neighbors(j)) {
        if (l == i) continue;
        double phi = turning_angle(g, emb, i, j, l);
        shared->angles(from, shared->row_of(j, l)) = std::exp(half_i * phi);
      }
    }
  }

  shared_ = std::move(shared);
  theta_ = std::move(theta);
  w_.resize(theta_.size());
  for (std::size_t k = 0; k < theta_.size(); ++k)
    w_[k] = std::tanh(std::clamp(theta_[k], -cfg.theta_clamp, cfg.theta_clamp));
}

KacWardSystem KacWardSystem::with_theta(std::vector<double> theta) const {
  if (theta.size() != theta_.size()) throw BadValueError("theta size mismatch");
  KacWardSystem out = *this;
  out.theta_ = std::move(theta);
  for (std::size_t k = 0; k < out.theta_.size(); ++k)
    out.w_[k] = std::tanh(
        std::clamp(out.theta_[k], -shared_->cfg.theta_clamp, shared_->cfg.theta_clamp));
  return out;
}

const Graph& KacWardSystem::graph() const { return shared_->graph; }
const DirectedEdgeIndex& KacWardSystem::index() const { return shared_->index; }
const Eigen::MatrixXcd& KacWardSystem::angle_matrix() const { return shared_->angles; }
const KacWardConfig& KacWardSystem::config() const { return shared_->cfg; }

Eigen::MatrixXcd KacWardSystem::transition() const {
  Eigen::MatrixXcd w = shared_->angles;
  for (int c = 0; c < w.cols(); ++c) w.col(c) *= w_[c / 2];
  return w;
}

double KacWardSystem::log_partition() const {
  const KacWardConfig& cfg = shared_->cfg;
  const int n = shared_->graph.num_vertices();
  const int m = shared_->index.size();

  double value = n * std::numbers::ln2;
  for (double t : theta_) value += log_cosh(t);
  if (m == 0) return value;

  Eigen::MatrixXcd i_minus_w = Eigen::MatrixXcd::Identity(m, m) - transition();
  LogDet det = complex_log_det(i_minus_w);
  if (det.singular || det.re < std::log(cfg.det_tol))
    throw NumericalError("det(I-W) vanished or went negative");
  if (std::abs(det.im_wrapped) > cfg.imag_tol * std::max(1.0, std::abs(det.re)))
    throw NumericalError("det(I-W) has a non-real residue; embedding or angles inconsistent");
  return value + 0.5 * det.re;
}

InferenceResult KacWardSystem::infer(bool want_hessian) const {
  const KacWardConfig& cfg = shared_->cfg;
  const Graph& g = shared_->graph;
  const int n = g.num_vertices();
  const int ne = g.num_edges();
  const int m = shared_->index.size();

  InferenceResult out;
  out.log_partition = n * std::numbers::ln2;
  for (double t : theta_) out.log_partition += log_cosh(t);
  out.edge_moments = Eigen::VectorXd::Zero(ne);
  if (want_hessian) out.hessian = Eigen::MatrixXd::Zero(ne, ne);
  if (m == 0) return out;

  Eigen::MatrixXcd i_minus_w = Eigen::MatrixXcd::Identity(m, m) - transition();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(i_minus_w);

  LogDet det;
  {
    double im = 0;
    for (int k = 0; k < m; ++k) {
      std::complex<double> d = lu.matrixLU()(k, k);
      if (d == std::complex<double>(0, 0)) det.singular = true;
      if (!det.singular) {
        det.re += std::log(std::abs(d));
        im += std::arg(d);
      }
    }
    if (lu.permutationP().determinant() < 0) im += kPi;
    det.im_wrapped = wrap_to_pi(im);
  }
  if (det.singular || det.re < std::log(cfg.det_tol))
    throw NumericalError("det(I-W) vanished or went negative");
  if (std::abs(det.im_wrapped) > cfg.imag_tol * std::max(1.0, std::abs(det.re)))
    throw NumericalError("det(I-W) has a non-real residue; embedding or angles inconsistent");
  out.log_partition += 0.5 * det.re;

  Eigen::MatrixXcd s = lu.solve(shared_->angles);

  for (int k = 0; k < ne; ++k) {
    std::complex<double> diag_sum = s(2 * k, 2 * k) + s(2 * k + 1, 2 * k + 1);
    std::complex<double> mu = w_[k] - 0.5 * (1 - w_[k] * w_[k]) * diag_sum;
    if (std::abs(mu.imag()) > cfg.imag_tol * std::max(1.0, std::abs(mu.real())))
      throw NumericalError("edge moment has a non-real residue");
    double value = mu.real();
    if (std::abs(value) > 1 + 1e-9) throw NumericalError("edge moment outside [-1, 1]");
    out.edge_moments[k] = std::clamp(value, -1.0, 1.0);
  }

  if (want_hessian) {
    Eigen::MatrixXcd prod = s.cwiseProduct(s.transpose());
    Eigen::MatrixXd& h = *out.hessian;
    for (int k = 0; k < ne; ++k) {
      h(k, k) = 1 - out.edge_moments[k] * out.edge_moments[k];
      for (int l = k + 1; l < ne; ++l) {
        int a = 2 * k, b = 2 * l;
        std::complex<double> t =
            prod(a, b) + prod(a ^ 1, b) + prod(a, b ^ 1) + prod(a ^ 1, b ^ 1);
        if (std::abs(t.imag()) > cfg.imag_tol * std::max(1.0, std::abs(t.real())))
          throw NumericalError("hessian entry has a non-real residue");
        double value = -0.5 * (1 - w_[k] * w_[k]) * t.real() * (1 - w_[l] * w_[l]);
        h(k, l) = value;
        h(l, k) = value;
      }
    }
  }
  return out;
}

Eigen::VectorXd KacWardSystem::edge_moments() const { return infer(false).edge_moments; }

Eigen::MatrixXd KacWardSystem::hessian() const { return *infer(true).hessian; }

KacWardSystem build_kacward(const IsingModel& model, const PlanarEmbedding& emb,
                            KacWardConfig cfg) {
  if (!model.zero_field()) throw NonZeroFieldError("Kac-Ward requires a zero-field model");
  return KacWardSystem(model.graph, emb, model.theta_edges, cfg);
}

double log_partition(const KacWardSystem& sys) { return sys.log_partition(); }
Eigen::VectorXd edge_moments(const KacWardSystem& sys) { return sys.edge_moments(); }
Eigen::MatrixXd hessian(const KacWardSystem& sys) { return sys.hessian(); }

BruteForceResult brute_force_inference(const IsingModel& model) {
  const int n = model.graph.num_vertices();
  if (n > 20) throw TooLargeError("brute force limited to n <= 20");
  model.check_consistent();

  const long num_states = 1L << n;
  const auto& edges = model.graph.edges();

  std::vector<double> energy(num_states);
  double max_energy = -std::numeric_limits<double>::infinity();
  std::vector<double> spin(n);
  for (long s = 0; s < num_states; ++s) {
    for (int i = 0; i < n; ++i) spin[i] = (s >> i) & 1 ? 1.0 : -1.0;
    double e = 0;
    for (int i = 0; i < n; ++i) e += model.theta_nodes[i] * spin[i];
    for (int k = 0; k < model.graph.num_edges(); ++k)
      e += model.theta_edges[k] * spin[edges[k].first] * spin[edges[k].second];
    energy[s] = e;
    max_energy = std::max(max_energy, e);
  }
  if (n == 0) {
    BruteForceResult out;
    out.log_partition = 0;
    out.moments = MomentSet(0);
    return out;
  }

  double sum = 0;
  for (long s = 0; s < num_states; ++s) sum += std::exp(energy[s] - max_energy);
  double log_z = max_energy + std::log(sum);

  BruteForceResult out;
  out.log_partition = log_z;
  out.moments = MomentSet(n);
  Eigen::VectorXd first = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  for (long s = 0; s < num_states; ++s) {
    double p = std::exp(energy[s] - log_z);
    for (int i = 0; i < n; ++i) spin[i] = (s >> i) & 1 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
      first[i] += p * spin[i];
      for (int j = i + 1; j < n; ++j) second(i, j) += p * spin[i] * spin[j];
    }
  }
  out.moments.first = first;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.moments.set_pair(i, j, second(i, j));
  return out;
}

}  // namespace pising
