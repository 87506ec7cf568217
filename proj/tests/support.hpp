// Test-side oracles, implemented independently of the library's algorithms so
// the two routes can disagree: minor-based planarity, exhaustive enumeration,
// geometric drawing audits, and finite differences.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pising/graph.hpp"
#include "pising/ising.hpp"
#include "pising/kacward.hpp"

namespace testsup {

// ---------------------------------------------------------------------------
// Planarity by forbidden minors (Wagner): a graph is planar iff no sequence of
// edge contractions produces a K5 or K3,3 subgraph. Exponential, fine for the
// n <= 7 graphs it is used on.

struct MinorGraph {
  int n = 0;
  std::vector<std::uint32_t> adj;  // bitmask rows

  void add(int u, int v) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
};

inline MinorGraph to_minor_graph(const pising::Graph& g) {
  MinorGraph m;
  m.n = g.num_vertices();
  m.adj.assign(m.n, 0);
  for (auto [u, v] : g.edges()) m.add(u, v);
  return m;
}

inline bool has_k5_subgraph(const MinorGraph& g) {
  std::vector<int> live;
  for (int v = 0; v < g.n; ++v)
    if (g.adj[v]) live.push_back(v);
  int m = static_cast<int>(live.size());
  if (m < 5) return false;
  std::vector<int> pick;
  // choose 5 live vertices, all pairwise adjacent
  std::vector<int> idx(5);
  std::function<bool(int, int)> rec = [&](int start, int depth) -> bool {
    if (depth == 5) return true;
    for (int i = start; i < m; ++i) {
      int v = live[i];
      bool ok = true;
      for (int d = 0; d < depth; ++d)
        if (!(g.adj[v] >> idx[d] & 1)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      idx[depth] = v;
      if (rec(i + 1, depth + 1)) return true;
    }
    return false;
  };
  return rec(0, 0);
}

inline bool has_k33_subgraph(const MinorGraph& g) {
  std::vector<int> live;
  for (int v = 0; v < g.n; ++v)
    if (g.adj[v]) live.push_back(v);
  int m = static_cast<int>(live.size());
  if (m < 6) return false;
  // choose 6 vertices, then try all 3|3 splits
  std::vector<int> comb;
  std::function<bool(int)> rec = [&](int start) -> bool {
    if (comb.size() == 6) {
      static const int splits[10][3] = {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {0, 1, 5}, {0, 2, 3},
                                        {0, 2, 4}, {0, 2, 5}, {0, 3, 4}, {0, 3, 5}, {0, 4, 5}};
      for (const auto& s : splits) {
        std::vector<int> a, b;
        for (int i = 0; i < 6; ++i) {
          if (i == s[0] || i == s[1] || i == s[2])
            a.push_back(comb[i]);
          else
            b.push_back(comb[i]);
        }
        bool ok = true;
        for (int u : a)
          for (int v : b)
            if (!(g.adj[u] >> v & 1)) ok = false;
        if (ok) return true;
      }
      return false;
    }
    for (int i = start; i < m; ++i) {
      comb.push_back(live[i]);
      if (rec(i + 1)) return true;
      comb.pop_back();
    }
    return false;
  };
  return rec(0);
}

inline MinorGraph contract(const MinorGraph& g, int u, int v) {
  // merge v into u
  MinorGraph out = g;
  out.adj[u] |= out.adj[v];
  out.adj[u] &= ~(1u << u);
  out.adj[u] &= ~(1u << v);
  for (int w = 0; w < out.n; ++w) {
    if (out.adj[w] >> v & 1) {
      out.adj[w] &= ~(1u << v);
      if (w != u) {
        out.adj[w] |= 1u << u;
        out.adj[u] |= 1u << w;
      }
    }
  }
  out.adj[v] = 0;
  return out;
}

inline bool has_bad_minor(const MinorGraph& g) {
  if (has_k5_subgraph(g) || has_k33_subgraph(g)) return true;
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (g.adj[u] >> v & 1)
        if (has_bad_minor(contract(g, u, v))) return true;
  return false;
}

inline bool minor_planar(const pising::Graph& g) { return !has_bad_minor(to_minor_graph(g)); }

// ---------------------------------------------------------------------------
// Exhaustive enumeration, written from the density directly (second route to
// the library's own enumerator).

struct EnumResult {
  double log_z = 0;
  std::vector<double> state_prob;        // indexed by bitmask, bit i set <=> x_i = +1
  Eigen::VectorXd first;                 // E[x_i]
  Eigen::MatrixXd second;                // E[x_i x_j], unit diagonal
};

inline EnumResult enumerate_model(const pising::IsingModel& model) {
  const int n = model.graph.num_vertices();
  const auto& edges = model.graph.edges();
  EnumResult out;
  out.state_prob.assign(std::size_t(1) << n, 0.0);
  out.first = Eigen::VectorXd::Zero(n);
  out.second = Eigen::MatrixXd::Identity(n, n);

  std::vector<double> energy(out.state_prob.size());
  double emax = -1e300;
  for (std::size_t s = 0; s < out.state_prob.size(); ++s) {
    double e = 0;
    for (int i = 0; i < n; ++i) e += model.theta_nodes[i] * ((s >> i & 1) ? 1 : -1);
    for (int k = 0; k < model.graph.num_edges(); ++k) {
      double xu = (s >> edges[k].first & 1) ? 1 : -1;
      double xv = (s >> edges[k].second & 1) ? 1 : -1;
      e += model.theta_edges[k] * xu * xv;
    }
    energy[s] = e;
    emax = std::max(emax, e);
  }
  double sum = 0;
  for (double e : energy) sum += std::exp(e - emax);
  out.log_z = emax + std::log(sum);
  for (std::size_t s = 0; s < out.state_prob.size(); ++s) {
    double p = std::exp(energy[s] - out.log_z);
    out.state_prob[s] = p;
    for (int i = 0; i < n; ++i) {
      double xi = (s >> i & 1) ? 1 : -1;
      out.first[i] += p * xi;
      for (int j = i + 1; j < n; ++j) {
        double xj = (s >> j & 1) ? 1 : -1;
        out.second(i, j) += p * xi * xj;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.second(j, i) = out.second(i, j);
  return out;
}

inline pising::MomentSet exact_moments(const pising::IsingModel& model) {
  EnumResult e = enumerate_model(model);
  pising::MomentSet out(model.graph.num_vertices());
  out.first = e.first;
  out.second = e.second;
  return out;
}

// ---------------------------------------------------------------------------
// Drawing audits.

inline double cross(double ox, double oy, double ax, double ay, double bx, double by) {
  return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

inline bool on_segment_strict(double px, double py, double ax, double ay, double bx,
                              double by) {
  if (cross(ax, ay, bx, by, px, py) != 0) return false;
  if (px == ax && py == ay) return false;
  if (px == bx && py == by) return false;
  return std::min(ax, bx) <= px && px <= std::max(ax, bx) &&
         std::min(ay, by) <= py && py <= std::max(ay, by);
}

// true when the open segments properly intersect
inline bool segments_cross(double ax, double ay, double bx, double by, double cx, double cy,
                           double dx, double dy) {
  double d1 = cross(cx, cy, dx, dy, ax, ay);
  double d2 = cross(cx, cy, dx, dy, bx, by);
  double d3 = cross(ax, ay, bx, by, cx, cy);
  double d4 = cross(ax, ay, bx, by, dx, dy);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// No proper crossings between disjoint edges, no vertex strictly inside an
// edge. Coordinates from the library are integer-valued, so doubles are exact.
inline bool drawing_is_plane(const pising::Graph& g, const pising::PlanarEmbedding& emb) {
  const auto& c = emb.coords;
  const auto& es = g.edges();
  for (std::size_t a = 0; a < es.size(); ++a) {
    auto [u1, v1] = es[a];
    for (std::size_t b = a + 1; b < es.size(); ++b) {
      auto [u2, v2] = es[b];
      if (u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2) continue;
      if (segments_cross(c[u1][0], c[u1][1], c[v1][0], c[v1][1], c[u2][0], c[u2][1],
                         c[v2][0], c[v2][1]))
        return false;
    }
    for (int w = 0; w < g.num_vertices(); ++w) {
      if (w == u1 || w == v1) continue;
      if (on_segment_strict(c[w][0], c[w][1], c[u1][0], c[u1][1], c[v1][0], c[v1][1]))
        return false;
    }
  }
  // distinct vertex positions
  for (int v = 0; v < g.num_vertices(); ++v)
    for (int w = v + 1; w < g.num_vertices(); ++w)
      if (c[v][0] == c[w][0] && c[v][1] == c[w][1]) return false;
  return true;
}

// Sum of clockwise turning angles per face. Faces containing an immediate
// backtrack (bridges) are skipped — the half-turn sign is orientation
// dependent there. Returns false when any audited face misses ±2π or a
// component sees no +2π outer face.
inline bool face_angle_audit(const pising::Graph& g, const pising::PlanarEmbedding& emb,
                             std::string* detail = nullptr) {
  auto faces = pising::trace_faces(g, emb);
  auto comps = g.components();
  std::vector<int> comp_of(g.num_vertices(), -1);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (int v : comps[c]) comp_of[v] = static_cast<int>(c);
  std::vector<int> outer_count(comps.size(), 0);

  const double two_pi = 2 * std::numbers::pi;
  for (const auto& face : faces) {
    bool has_uturn = false;
    double sum = 0;
    for (std::size_t k = 0; k < face.size(); ++k) {
      auto [i, j] = face[k];
      int l = face[(k + 1) % face.size()].second;
      if (l == i) {
        has_uturn = true;
        break;
      }
      sum += pising::turning_angle(g, emb, i, j, l);
    }
    if (has_uturn) continue;
    if (std::abs(sum - two_pi) < 1e-9) {
      outer_count[comp_of[face.front().first]]++;
    } else if (std::abs(sum + two_pi) > 1e-9) {
      if (detail) *detail = "face angle sum " + std::to_string(sum);
      return false;
    }
  }
  for (std::size_t c = 0; c < comps.size(); ++c) {
    // u-turn faces (skipped above) occur exactly at degree-1 vertices, so the
    // unique-outer-face check is only decisive for leafless components.
    bool leafless = true;
    for (int v : comps[c])
      if (g.degree(v) == 1) leafless = false;
    if (comps[c].size() >= 3 && leafless && outer_count[c] != 1) {
      if (detail) *detail = "component without a unique outer face";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Finite differences.

inline Eigen::VectorXd fd_gradient(const pising::Graph& g, const pising::PlanarEmbedding& emb,
                                   const std::vector<double>& theta, double h = 1e-5) {
  Eigen::VectorXd out(g.num_edges());
  for (int k = 0; k < g.num_edges(); ++k) {
    std::vector<double> tp = theta, tm = theta;
    tp[k] += h;
    tm[k] -= h;
    double fp = pising::KacWardSystem(g, emb, tp).log_partition();
    double fm = pising::KacWardSystem(g, emb, tm).log_partition();
    out[k] = (fp - fm) / (2 * h);
  }
  return out;
}

inline Eigen::MatrixXd fd_hessian(const pising::Graph& g, const pising::PlanarEmbedding& emb,
                                  const std::vector<double>& theta, double h = 1e-5) {
  const int ne = g.num_edges();
  Eigen::MatrixXd out(ne, ne);
  for (int k = 0; k < ne; ++k) {
    std::vector<double> tp = theta, tm = theta;
    tp[k] += h;
    tm[k] -= h;
    Eigen::VectorXd mp = pising::KacWardSystem(g, emb, tp).edge_moments();
    Eigen::VectorXd mm = pising::KacWardSystem(g, emb, tm).edge_moments();
    out.col(k) = (mp - mm) / (2 * h);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random instances.

inline std::vector<double> random_theta(int count, double lo, double hi, std::uint64_t seed,
                                        double min_abs = 0.0) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(count);
  for (double& t : out) {
    do {
      t = dist(eng);
    } while (std::abs(t) < min_abs);
  }
  return out;
}

inline std::vector<double> edge_targets(const pising::Graph& g, const pising::MomentSet& ms) {
  std::vector<double> out;
  for (auto [u, v] : g.edges()) out.push_back(ms.pair(u, v));
  return out;
}

}  // namespace testsup
