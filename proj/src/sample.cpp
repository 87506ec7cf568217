#include "pising/sample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace pising {

namespace {

// splitmix64 finalizer; combines the run seed with a stream index so every
// sweep gets an independent, platform-stable engine seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in [0,1) from the top 53 bits; avoids distribution objects whose
// output is not pinned down by the standard.
double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Eigen::MatrixXi gibbs_sample(const IsingModel& model, const SampleConfig& cfg) {
  model.check_consistent();
  if (cfg.num_samples < 0) throw BadValueError("num_samples must be >= 0");
  if (cfg.burn_in < 0) throw BadValueError("burn_in must be >= 0");
  if (cfg.thin < 0) throw BadValueError("thin must be >= 0");

  const int n = model.graph.num_vertices();
  Eigen::MatrixXi out(cfg.num_samples, n);
  if (cfg.num_samples == 0 || n == 0) return out;

  std::vector<int> x(n, 1);
  std::uint64_t sweep = 0;
  auto run_sweep = [&]() {
    std::mt19937_64 eng(mix_seed(cfg.seed, sweep++));
    for (int i = 0; i < n; ++i) {
      double field = model.theta_nodes[i];
      for (int j : model.graph.neighbors(i))
        field += model.theta_edges[model.graph.edge_index(i, j)] * x[j];
      x[i] = uniform01(eng) < sigmoid(2 * field) ? 1 : -1;
    }
  };

  for (int s = 0; s < cfg.burn_in; ++s) run_sweep();
  for (long k = 0; k < cfg.num_samples; ++k) {
    for (int s = 0; s < cfg.thin; ++s) run_sweep();
    for (int i = 0; i < n; ++i) out(k, i) = x[i];
  }
  return out;
}

namespace {

double draw_theta(std::mt19937_64& eng, const GenSpec& spec) {
  if (!(spec.lo < spec.hi)) throw BadValueError("need lo < hi");
  double bound = std::max(std::abs(spec.lo), std::abs(spec.hi));
  if (spec.min_abs < 0 || spec.min_abs > bound)
    throw BadValueError("min_abs incompatible with the parameter range");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    double t = spec.lo + (spec.hi - spec.lo) * uniform01(eng);
    if (std::abs(t) >= spec.min_abs) return t;
  }
  throw BadValueError("parameter range rejects almost everything");
}

GeneratedModel finish(Graph g, std::vector<double> edge_theta,
                      std::vector<double> node_theta) {
  GeneratedModel out;
  out.embedding = straight_line_drawing(g);
  out.model = IsingModel(std::move(g), std::move(edge_theta), std::move(node_theta));
  return out;
}

GeneratedModel gen_grid(const GenSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw BadDimsError("grid needs rows, cols >= 1");
  const int n = spec.rows * spec.cols;
  Graph g(n);
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c) {
      int v = r * spec.cols + c;
      if (c + 1 < spec.cols) g.add_edge(v, v + 1);
      if (r + 1 < spec.rows) g.add_edge(v, v + spec.cols);
    }
  std::mt19937_64 eng(mix_seed(spec.seed, 0));
  std::vector<double> theta(g.num_edges());
  for (double& t : theta) t = draw_theta(eng, spec);
  return finish(std::move(g), std::move(theta), std::vector<double>(n, 0.0));
}

// Chords of a random triangulation of the convex polygon 0..n-1, each kept
// with probability 1/2; never crossing, so the cycle stays outer-planar.
void random_chords(std::mt19937_64& eng, int a, int b, std::vector<VertexPair>& chords) {
  if (b - a < 2) return;
  int m = a + 1 + static_cast<int>(uniform01(eng) * (b - a - 1));
  m = std::min(m, b - 1);
  if (m - a >= 2) chords.push_back(make_vertex_pair(a, m));
  if (b - m >= 2) chords.push_back(make_vertex_pair(m, b));
  random_chords(eng, a, m, chords);
  random_chords(eng, m, b, chords);
}

GeneratedModel gen_outerplanar(const GenSpec& spec) {
  if (spec.n < 3) throw BadDimsError("outer-planar generator needs n >= 3");
  const int n = spec.n;
  std::mt19937_64 eng(mix_seed(spec.seed, 0));

  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  std::vector<VertexPair> chords;
  random_chords(eng, 0, n - 1, chords);
  std::sort(chords.begin(), chords.end());
  for (auto [u, v] : chords)
    if (uniform01(eng) < 0.5 && !g.has_edge(u, v)) g.add_edge(u, v);

  std::vector<double> edge_theta(g.num_edges());
  for (double& t : edge_theta) t = draw_theta(eng, spec);
  std::vector<double> node_theta(n);
  for (double& t : node_theta) t = draw_theta(eng, spec);
  return finish(std::move(g), std::move(edge_theta), std::move(node_theta));
}

GeneratedModel gen_random_planar(const GenSpec& spec) {
  if (spec.n < 1) throw BadDimsError("random planar generator needs n >= 1");
  const int n = spec.n;
  std::mt19937_64 eng(mix_seed(spec.seed, 0));

  std::vector<VertexPair> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  for (std::size_t i = pairs.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform01(eng) * i);
    std::swap(pairs[i - 1], pairs[std::min(j, i - 1)]);
  }

  // Random spanning tree first (keeps the model connected), then a coin per
  // remaining pair, accepted only when planarity survives.
  Graph g(n);
  std::vector<int> root(n);
  for (int i = 0; i < n; ++i) root[i] = i;
  auto find = [&](int v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  std::vector<VertexPair> rest;
  for (auto [u, v] : pairs) {
    int ru = find(u), rv = find(v);
    if (ru != rv) {
      root[ru] = rv;
      g.add_edge(u, v);
    } else {
      rest.push_back({u, v});
    }
  }
  for (auto [u, v] : rest) {
    if (uniform01(eng) >= 0.5) continue;
    Graph trial = g.with_edge(u, v);
    if (is_planar(trial)) g = std::move(trial);
  }

  std::vector<double> theta(g.num_edges());
  for (double& t : theta) t = draw_theta(eng, spec);
  return finish(std::move(g), std::move(theta), std::vector<double>(n, 0.0));
}

}  // namespace

GeneratedModel gen_model(const GenSpec& spec) {
  switch (spec.kind) {
    case ModelKind::grid:
      return gen_grid(spec);
    case ModelKind::outerplanar:
      return gen_outerplanar(spec);
    case ModelKind::random_planar:
      return gen_random_planar(spec);
  }
  throw BadValueError("unknown model kind");
}

}  // namespace pising
