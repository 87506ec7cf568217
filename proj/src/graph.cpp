#include "pising/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <map>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/chrobak_payne_drawing.hpp>
#include <boost/graph/make_biconnected_planar.hpp>
#include <boost/graph/make_maximal_planar.hpp>
#include <boost/graph/planar_canonical_ordering.hpp>

namespace pising {

namespace {

using BoostGraph =
    boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                          boost::property<boost::vertex_index_t, int>,
                          boost::property<boost::edge_index_t, int>>;
using BoostEdge = boost::graph_traits<BoostGraph>::edge_descriptor;

BoostGraph to_boost(const Graph& g) {
  BoostGraph bg(g.num_vertices());
  for (const auto& [u, v] : g.edges()) boost::add_edge(u, v, bg);
  return bg;
}

void reindex_edges(BoostGraph& bg) {
  auto index = boost::get(boost::edge_index, bg);
  int count = 0;
  for (auto [ei, ei_end] = boost::edges(bg); ei != ei_end; ++ei)
    boost::put(index, *ei, count++);
}

bool boost_is_planar(BoostGraph& bg) {
  return boost::boyer_myrvold_planarity_test(bg);
}

using EmbeddingStorage = std::vector<std::vector<BoostEdge>>;

bool boost_embedding(BoostGraph& bg, EmbeddingStorage& storage) {
  storage.assign(boost::num_vertices(bg), {});
  auto pmap = boost::make_iterator_property_map(storage.begin(),
                                                boost::get(boost::vertex_index, bg));
  return boost::boyer_myrvold_planarity_test(
      boost::boyer_myrvold_params::graph = bg,
      boost::boyer_myrvold_params::embedding = pmap);
}

double heading(const std::array<double, 2>& from, const std::array<double, 2>& to) {
  return std::atan2(to[1] - from[1], to[0] - from[0]);
}

// Wrap to (-pi, pi].
double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  while (a > pi) a -= 2 * pi;
  while (a <= -pi) a += 2 * pi;
  return a;
}

// Sort each vertex's neighbors clockwise (decreasing atan2) around it.
std::vector<std::vector<int>> rotation_from_coords(
    const Graph& g, const std::vector<std::array<double, 2>>& coords) {
  std::vector<std::vector<int>> rotation(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    rotation[v] = g.neighbors(v);
    std::sort(rotation[v].begin(), rotation[v].end(), [&](int a, int b) {
      double ha = heading(coords[v], coords[a]);
      double hb = heading(coords[v], coords[b]);
      if (ha != hb) return ha > hb;
      return a < b;  // unreachable in a valid drawing
    });
  }
  return rotation;
}

// Straight-line drawing of one connected component (local vertex ids).
std::vector<std::array<double, 2>> draw_component(const Graph& local) {
  const int k = local.num_vertices();
  std::vector<std::array<double, 2>> coords(k);
  if (k == 1) {
    coords[0] = {0, 0};
    return coords;
  }
  if (k == 2) {
    coords[0] = {0, 0};
    coords[1] = {1, 0};
    return coords;
  }

  BoostGraph bg = to_boost(local);
  reindex_edges(bg);
  EmbeddingStorage embedding;
  if (!boost_embedding(bg, embedding)) throw NonPlanarError("graph is not planar");

  // Triangulate: biconnect, then make maximal planar; the added edges are
  // dummies only needed to run the shift drawing.
  auto embedding_map = [&]() {
    return boost::make_iterator_property_map(embedding.begin(),
                                             boost::get(boost::vertex_index, bg));
  };
  boost::make_biconnected_planar(bg, embedding_map());
  reindex_edges(bg);
  boost_embedding(bg, embedding);
  boost::make_maximal_planar(bg, embedding_map());
  reindex_edges(bg);
  boost_embedding(bg, embedding);

  std::vector<boost::graph_traits<BoostGraph>::vertex_descriptor> ordering;
  boost::planar_canonical_ordering(bg, embedding_map(), std::back_inserter(ordering));

  struct GridPoint {
    std::size_t x = 0, y = 0;
  };
  std::vector<GridPoint> grid(boost::num_vertices(bg));
  boost::chrobak_payne_straight_line_drawing(
      bg, embedding_map(), ordering.begin(), ordering.end(),
      boost::make_iterator_property_map(grid.begin(),
                                        boost::get(boost::vertex_index, bg)));

  for (int v = 0; v < k; ++v)
    coords[v] = {static_cast<double>(grid[v].x), static_cast<double>(grid[v].y)};
  return coords;
}

}  // namespace

Graph::Graph(int n) : n_(n), adjacency_(n) {
  if (n < 0) throw BadValueError("negative vertex count");
}

Graph::Graph(int n, const std::vector<VertexPair>& edge_list) : Graph(n) {
  for (const auto& [u, v] : edge_list) add_edge(u, v);
}

void Graph::check_vertex(int v) const {
  if (v < 0 || v >= n_) throw BadValueError("vertex id out of range");
}

void Graph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw BadValueError("self-loop");
  if (has_edge(u, v)) throw BadValueError("parallel edge");
  edges_.push_back(make_vertex_pair(u, v));
  adjacency_[u].insert(std::upper_bound(adjacency_[u].begin(), adjacency_[u].end(), v), v);
  adjacency_[v].insert(std::upper_bound(adjacency_[v].begin(), adjacency_[v].end(), u), u);
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) return false;
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

int Graph::edge_index(int u, int v) const {
  VertexPair key = make_vertex_pair(u, v);
  for (int k = 0; k < num_edges(); ++k)
    if (edges_[k] == key) return k;
  return -1;
}

const std::vector<int>& Graph::neighbors(int v) const {
  check_vertex(v);
  return adjacency_[v];
}

Graph Graph::with_edge(int u, int v) const {
  Graph out = *this;
  out.add_edge(u, v);
  return out;
}

std::vector<std::vector<int>> Graph::components() const {
  std::vector<int> label(n_, -1);
  std::vector<std::vector<int>> out;
  for (int start = 0; start < n_; ++start) {
    if (label[start] >= 0) continue;
    int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack = {start};
    label[start] = id;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out[id].push_back(v);
      for (int w : adjacency_[v])
        if (label[w] < 0) {
          label[w] = id;
          stack.push_back(w);
        }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

bool is_planar(const Graph& g) {
  if (g.num_vertices() <= 4) return true;
  BoostGraph bg = to_boost(g);
  return boost_is_planar(bg);
}

PlanarEmbedding planar_embedding(const Graph& g) {
  BoostGraph bg = to_boost(g);
  EmbeddingStorage storage;
  if (!boost_embedding(bg, storage)) throw NonPlanarError("graph is not planar");

  PlanarEmbedding emb;
  emb.rotation.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (const BoostEdge& e : storage[v]) {
      int a = static_cast<int>(boost::source(e, bg));
      int b = static_cast<int>(boost::target(e, bg));
      emb.rotation[v].push_back(a == v ? b : a);
    }
  }
  return emb;
}

PlanarEmbedding straight_line_drawing(const Graph& g, const PlanarEmbedding&) {
  return straight_line_drawing(g);
}

PlanarEmbedding straight_line_drawing(const Graph& g) {
  if (!is_planar(g)) throw NonPlanarError("graph is not planar");

  PlanarEmbedding emb;
  emb.coords.assign(g.num_vertices(), {0, 0});

  // Each component drawn on its own integer grid, then stacked in disjoint
  // horizontal bands.
  double y_offset = 0;
  for (const auto& comp : g.components()) {
    std::map<int, int> local_id;
    for (int v : comp) local_id.emplace(v, static_cast<int>(local_id.size()));
    Graph local(static_cast<int>(comp.size()));
    for (const auto& [u, v] : g.edges())
      if (local_id.count(u) && local_id.count(v)) local.add_edge(local_id[u], local_id[v]);

    auto local_coords = draw_component(local);
    double height = 0;
    for (int v : comp) {
      auto c = local_coords[local_id[v]];
      emb.coords[v] = {c[0], c[1] + y_offset};
      height = std::max(height, c[1]);
    }
    y_offset += height + 2;
  }

  emb.rotation = rotation_from_coords(g, emb.coords);
  return emb;
}

double turning_angle(const Graph& g, const PlanarEmbedding& emb, int i, int j, int l) {
  if (!emb.has_coords()) throw BadValueError("embedding has no coordinates");
  if (!g.has_edge(i, j)) throw MissingEdgeError("no edge between first pair");
  if (!g.has_edge(j, l)) throw MissingEdgeError("no edge between second pair");
  if (i == l) throw BadValueError("turning angle undefined for an immediate reversal");
  double incoming = heading(emb.coords[i], emb.coords[j]);
  double outgoing = heading(emb.coords[j], emb.coords[l]);
  return wrap_angle(incoming - outgoing);  // clockwise positive
}

std::vector<VertexPair> candidate_edges(const Graph& g) {
  if (!is_planar(g)) throw NonPlanarError("graph is not planar");
  std::vector<VertexPair> out;
  BoostGraph bg = to_boost(g);
  for (int u = 0; u < g.num_vertices(); ++u) {
    for (int v = u + 1; v < g.num_vertices(); ++v) {
      if (g.has_edge(u, v)) continue;
      auto [e, added] = boost::add_edge(u, v, bg);
      if (boost_is_planar(bg)) out.push_back({u, v});
      boost::remove_edge(e, bg);
    }
  }
  return out;
}

std::vector<VertexPair> greedy_planar_augmentation(const Graph& g,
                                                   const std::vector<VertexPair>& delta) {
  if (!is_planar(g)) throw NonPlanarError("graph is not planar");
  std::vector<VertexPair> ordered;
  for (const auto& [u, v] : delta) ordered.push_back(make_vertex_pair(u, v));
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::vector<VertexPair> kept;
  BoostGraph bg = to_boost(g);
  for (const auto& [u, v] : ordered) {
    if (g.has_edge(u, v)) throw BadValueError("candidate already in graph");
    auto [e, added] = boost::add_edge(u, v, bg);
    if (boost_is_planar(bg))
      kept.push_back({u, v});
    else
      boost::remove_edge(e, bg);
  }
  return kept;
}

std::vector<std::vector<std::pair<int, int>>> trace_faces(const Graph& g,
                                                          const PlanarEmbedding& emb) {
  // Position of each neighbor in each rotation list.
  std::vector<std::map<int, int>> pos(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v)
    for (int k = 0; k < static_cast<int>(emb.rotation[v].size()); ++k)
      pos[v].emplace(emb.rotation[v][k], k);

  std::set<std::pair<int, int>> visited;
  std::vector<std::vector<std::pair<int, int>>> faces;
  for (const auto& [eu, ev] : g.edges()) {
    for (auto start : {std::pair{eu, ev}, std::pair{ev, eu}}) {
      if (visited.count(start)) continue;
      std::vector<std::pair<int, int>> face;
      auto cur = start;
      do {
        visited.insert(cur);
        face.push_back(cur);
        auto [i, j] = cur;
        const auto& rot = emb.rotation[j];
        int next = rot[(pos[j].at(i) + 1) % rot.size()];
        cur = {j, next};
      } while (cur != start);
      faces.push_back(std::move(face));
    }
  }
  return faces;
}

std::vector<int> faces_per_component(const Graph& g, const PlanarEmbedding& emb) {
  auto comps = g.components();
  std::vector<int> comp_of(g.num_vertices());
  for (int c = 0; c < static_cast<int>(comps.size()); ++c)
    for (int v : comps[c]) comp_of[v] = c;

  std::vector<int> count(comps.size(), 0);
  for (const auto& face : trace_faces(g, emb)) ++count[comp_of[face.front().first]];
  // An isolated vertex has one (unbounded) face and no traversable edges.
  for (int c = 0; c < static_cast<int>(comps.size()); ++c)
    if (count[c] == 0) count[c] = 1;
  return count;
}

}  // namespace pising
