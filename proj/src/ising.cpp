#include "pising/ising.hpp"

#include <cmath>

namespace pising {

IsingModel::IsingModel(Graph g)
    : graph(std::move(g)),
      theta_edges(graph.num_edges(), 0.0),
      theta_nodes(graph.num_vertices(), 0.0) {}

IsingModel::IsingModel(Graph g, std::vector<double> edge_theta, std::vector<double> node_theta)
    : graph(std::move(g)),
      theta_edges(std::move(edge_theta)),
      theta_nodes(std::move(node_theta)) {
  if (theta_nodes.empty()) theta_nodes.assign(graph.num_vertices(), 0.0);
  check_consistent();
}

bool IsingModel::zero_field() const {
  for (double h : theta_nodes)
    if (h != 0.0) return false;
  return true;
}

void IsingModel::check_consistent() const {
  if (static_cast<int>(theta_edges.size()) != graph.num_edges())
    throw BadValueError("theta_edges size does not match edge count");
  if (static_cast<int>(theta_nodes.size()) != graph.num_vertices())
    throw BadValueError("theta_nodes size does not match vertex count");
  for (double t : theta_edges)
    if (!std::isfinite(t)) throw BadValueError("non-finite edge parameter");
  for (double t : theta_nodes)
    if (!std::isfinite(t)) throw BadValueError("non-finite node parameter");
  if (aux_vertex && (*aux_vertex < 0 || *aux_vertex >= graph.num_vertices()))
    throw BadValueError("aux_vertex out of range");
}

MomentSet::MomentSet(int n_vertices)
    : n(n_vertices),
      first(Eigen::VectorXd::Zero(n_vertices)),
      second(Eigen::MatrixXd::Identity(n_vertices, n_vertices)) {}

void MomentSet::set_pair(int i, int j, double mu) {
  second(i, j) = mu;
  second(j, i) = mu;
}

IsingModel pairwise_to_ising(const PairwiseModel& pm) {
  const Graph& g = pm.graph;
  IsingModel out(g);
  const double spins[2] = {-1.0, +1.0};

  for (int v = 0; v < g.num_vertices(); ++v)
    for (int a = 0; a < 2; ++a) out.theta_nodes[v] += 0.5 * spins[a] * pm.node_potentials[v][a];

  for (int k = 0; k < g.num_edges(); ++k) {
    auto [u, v] = g.edges()[k];
    const auto& f = pm.edge_potentials[k];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        out.theta_edges[k] += 0.25 * spins[a] * spins[b] * f[a][b];
        out.theta_nodes[u] += 0.25 * spins[a] * f[a][b];
        out.theta_nodes[v] += 0.25 * spins[b] * f[a][b];
      }
  }
  return out;
}

PairTable moments_to_marginals(double mu_i, double mu_j, double mu_ij) {
  PairTable t;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double xi = a ? 1.0 : -1.0;
      double xj = b ? 1.0 : -1.0;
      double p = 0.25 * (1 + mu_i * xi + mu_j * xj + mu_ij * xi * xj);
      if (p < -1e-12) throw NotRealizableError("pair moments admit no distribution");
      t.p[a][b] = std::max(p, 0.0);
    }
  return t;
}

MomentSet empirical_moments(const Eigen::MatrixXi& samples) {
  const long s_count = samples.rows();
  const int n = static_cast<int>(samples.cols());
  if (s_count < 1) throw BadValueError("need at least one sample");
  for (long s = 0; s < s_count; ++s)
    for (int i = 0; i < n; ++i)
      if (samples(s, i) != 1 && samples(s, i) != -1)
        throw BadValueError("sample entries must be -1 or +1");

  Eigen::MatrixXd x = samples.cast<double>();
  MomentSet out(n);
  out.first = x.colwise().mean();
  out.second = (x.transpose() * x) / static_cast<double>(s_count);
  out.second.diagonal().setOnes();
  out.sample_count = s_count;
  return out;
}

IsingModel extend_zero_field(const IsingModel& m) {
  const int n = m.graph.num_vertices();
  Graph extended(n + 1);
  std::vector<double> theta;
  for (int k = 0; k < m.graph.num_edges(); ++k) {
    auto [u, v] = m.graph.edges()[k];
    extended.add_edge(u, v);
    theta.push_back(m.theta_edges[k]);
  }
  for (int i = 0; i < n; ++i) {
    if (m.theta_nodes[i] == 0.0) continue;  // zero-theta edges omitted
    extended.add_edge(i, n);
    theta.push_back(m.theta_nodes[i]);
  }
  IsingModel out(std::move(extended), std::move(theta));
  out.aux_vertex = n;
  return out;
}

IsingModel restrict_extended(const IsingModel& extended) {
  if (!extended.aux_vertex) throw BadValueError("model has no auxiliary vertex");
  const int aux = *extended.aux_vertex;
  const int n = extended.graph.num_vertices() - 1;
  // Relabel vertices above aux down by one (aux is conventionally last).
  auto relabel = [&](int v) { return v > aux ? v - 1 : v; };

  Graph g(n);
  std::vector<double> edge_theta;
  std::vector<double> node_theta(n, 0.0);
  for (int k = 0; k < extended.graph.num_edges(); ++k) {
    auto [u, v] = extended.graph.edges()[k];
    if (u == aux || v == aux) {
      int other = relabel(u == aux ? v : u);
      node_theta[other] = extended.theta_edges[k];
    } else {
      g.add_edge(relabel(u), relabel(v));
      edge_theta.push_back(extended.theta_edges[k]);
    }
  }
  return IsingModel(std::move(g), std::move(edge_theta), std::move(node_theta));
}

MomentSet restrict_extended_moments(const MomentSet& extended, int aux_vertex) {
  if (aux_vertex < 0 || aux_vertex >= extended.n) throw BadValueError("aux_vertex out of range");
  const int n = extended.n - 1;
  auto relabel = [&](int v) { return v > aux_vertex ? v - 1 : v; };
  MomentSet out(n);
  out.sample_count = extended.sample_count;
  for (int i = 0; i < extended.n; ++i) {
    if (i == aux_vertex) continue;
    out.first[relabel(i)] = extended.pair(i, aux_vertex);
    for (int j = i + 1; j < extended.n; ++j) {
      if (j == aux_vertex) continue;
      out.set_pair(relabel(i), relabel(j), extended.pair(i, j));
    }
  }
  return out;
}

MomentSet extend_moments(const MomentSet& moments) {
  MomentSet out(moments.n + 1);
  out.sample_count = moments.sample_count;
  for (int i = 0; i < moments.n; ++i) {
    out.set_pair(i, moments.n, moments.first[i]);
    for (int j = i + 1; j < moments.n; ++j) out.set_pair(i, j, moments.pair(i, j));
  }
  return out;
}

double pair_divergence(double t_i, double t_j, double t_ij,
                       double m_i, double m_j, double m_ij) {
  PairTable target = moments_to_marginals(t_i, t_j, t_ij);
  PairTable model = moments_to_marginals(m_i, m_j, m_ij);
  double d = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double p = target.p[a][b];
      double q = model.p[a][b];
      if (p == 0.0) continue;  // 0 log 0 = 0
      if (q == 0.0) throw InfiniteDivergenceError("target mass where model has none");
      d += p * std::log(p / q);
    }
  return std::max(d, 0.0);
}

MomentSet clamp_moments(const MomentSet& moments, double max_abs) {
  MomentSet out = moments;
  for (int i = 0; i < out.n; ++i) {
    out.first[i] = std::clamp(out.first[i], -max_abs, max_abs);
    for (int j = i + 1; j < out.n; ++j)
      out.set_pair(i, j, std::clamp(out.pair(i, j), -max_abs, max_abs));
  }
  return out;
}

}  // namespace pising
