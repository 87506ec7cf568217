#pragma once

#include <array>
#include <set>
#include <utility>
#include <vector>

#include "pising/errors.hpp"

namespace pising {

// Unordered vertex pair, stored normalized (first < second).
using VertexPair = std::pair<int, int>;

inline VertexPair make_vertex_pair(int u, int v) {
  return u < v ? VertexPair{u, v} : VertexPair{v, u};
}

// Simple undirected graph on vertices 0..n-1. No self-loops, no parallel
// edges. Edge order is insertion order; per-edge quantities elsewhere in the
// library (theta vectors, moment vectors) are indexed by it.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  Graph(int n, const std::vector<VertexPair>& edge_list);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;

  // Index of {u,v} in edges(), or -1.
  int edge_index(int u, int v) const;

  const std::vector<VertexPair>& edges() const { return edges_; }

  // Neighbors of v in ascending order.
  const std::vector<int>& neighbors(int v) const;

  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  // Copy with one additional edge.
  Graph with_edge(int u, int v) const;

  // Connected components as sorted vertex lists, ordered by smallest member.
  std::vector<std::vector<int>> components() const;

 private:
  void check_vertex(int v) const;

  int n_ = 0;
  std::vector<VertexPair> edges_;
  std::vector<std::vector<int>> adjacency_;
};

// Combinatorial embedding plus (optionally) a straight-line drawing.
// rotation[v] lists the neighbors of v in clockwise order as seen in the
// drawing; when no coords are present the order is whatever the planarity
// algorithm produced (still a valid rotation system).
struct PlanarEmbedding {
  std::vector<std::vector<int>> rotation;
  std::vector<std::array<double, 2>> coords;  // empty until a drawing is made

  bool has_coords() const { return !coords.empty(); }
};

bool is_planar(const Graph& g);

// Rotation system for a planar graph; coords left unset.
// Throws NonPlanarError otherwise.
PlanarEmbedding planar_embedding(const Graph& g);

// Fills coords with an integer-grid straight-line drawing (triangulate each
// component, canonical-ordering shift drawing, drop the dummy edges) and
// recomputes the rotation system from the coordinates so the two stay
// consistent. Components end up in disjoint horizontal bands.
PlanarEmbedding straight_line_drawing(const Graph& g, const PlanarEmbedding& emb);

PlanarEmbedding straight_line_drawing(const Graph& g);

// Signed clockwise rotation (radians, in (-pi, pi)) from the directed edge
// (i,j) to (j,l) in the drawing. Requires coords and both edges present.
double turning_angle(const Graph& g, const PlanarEmbedding& emb, int i, int j, int l);

// All absent pairs {i,j} whose addition keeps g planar, in canonical
// (min,max) lexicographic order.
std::vector<VertexPair> candidate_edges(const Graph& g);

// Maximal-by-inclusion subset of delta whose joint addition keeps g planar,
// scanning delta in canonical pair order.
std::vector<VertexPair> greedy_planar_augmentation(const Graph& g,
                                                   const std::vector<VertexPair>& delta);

// Faces of the embedding as cycles of directed edges; traversal follows the
// successor of the arrival vertex in the rotation at each step. Every
// directed edge appears in exactly one face.
std::vector<std::vector<std::pair<int, int>>> trace_faces(const Graph& g,
                                                          const PlanarEmbedding& emb);

// Face count per connected component (components ordered as Graph::components).
// Isolated vertices contribute one face.
std::vector<int> faces_per_component(const Graph& g, const PlanarEmbedding& emb);

}  // namespace pising
