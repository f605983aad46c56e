#ifndef FOEL_LATTICE_HPP
#define FOEL_LATTICE_HPP

#include <Eigen/Dense>
#include <compare>
#include <string>
#include <vector>

namespace foel {

// Undirected edge with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// A finite tree on vertices 0..L-1 with a distinguished root.
///
/// Edges are kept sorted by (min endpoint, max endpoint). The parent map is
/// derived by breadth-first traversal from the root, visiting children in
/// ascending vertex order, so every vertex has a unique non-backtracking
/// path to the root.
class TreeGraph {
 public:
  // Validates and builds; throws TreeError / InvalidSizeError.
  static TreeGraph from_edges(int vertex_count, std::vector<Edge> edges, int root = 0);

  int vertex_count() const noexcept { return vertex_count_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  int root() const noexcept { return root_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  // -1 for the root.
  int parent(int vertex) const { return parent_.at(vertex); }
  const std::vector<int>& parents() const noexcept { return parent_; }
  const std::vector<int>& neighbors(int vertex) const { return neighbors_.at(vertex); }
  int degree(int vertex) const { return static_cast<int>(neighbors_.at(vertex).size()); }

  bool operator==(const TreeGraph& other) const {
    return vertex_count_ == other.vertex_count_ && root_ == other.root_ && edges_ == other.edges_;
  }

 private:
  TreeGraph() = default;

  int vertex_count_ = 0;
  int root_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> neighbors_;
};

/// Line graph of a tree: one vertex per tree edge (in the tree's sorted edge
/// order), adjacent iff the two edges share a tree vertex.
struct LineGraph {
  std::vector<Edge> tree_edges;
  Eigen::MatrixXi adjacency;

  int vertex_count() const noexcept { return static_cast<int>(tree_edges.size()); }
  int edge_count() const { return adjacency.sum() / 2; }
};

// Path 0-1-...-(L-1), rooted at 0. Throws InvalidSizeError for L < 2.
TreeGraph build_chain(int vertex_count);

// Vertex count is inferred as 1 + the largest endpoint.
TreeGraph parse_tree(const std::vector<Edge>& edges, int root = 0);
TreeGraph parse_tree(int vertex_count, const std::vector<Edge>& edges, int root = 0);

LineGraph line_graph(const TreeGraph& tree);

// New pendant vertex with index L attached to `attach`.
TreeGraph add_leaf(const TreeGraph& tree, int attach);

// Subgraph induced on vertices 0..vertex_count-1. Throws TreeError if that
// subgraph is not connected.
TreeGraph induced_subtree(const TreeGraph& tree, int vertex_count);

// Whether `larger` is `smaller` with one leaf appended (vertex index L).
bool is_leaf_extension(const TreeGraph& smaller, const TreeGraph& larger);

// Canonical string of the unrooted isomorphism class (center-rooted
// parenthesis code, minimised over centers).
std::string canonical_code(const TreeGraph& tree);

// Every tree on `vertex_count` vertices, one per isomorphism class, ordered
// by canonical code. Vertices are relabelled breadth-first from a center.
std::vector<TreeGraph> enumerate_trees(int vertex_count);

// JSON tree file: {"vertices": L, "edges": [[u,v],...], "root": r}.
TreeGraph tree_from_json(const std::string& text);
std::string tree_to_json(const TreeGraph& tree);

}  // namespace foel

#endif  // FOEL_LATTICE_HPP
