#include "foel/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include "json.hpp"

#include "foel/errors.hpp"

namespace foel {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

std::string rooted_code(const TreeGraph& tree, int vertex, int from) {
  std::vector<std::string> children;
  for (int w : tree.neighbors(vertex)) {
    if (w != from) children.push_back(rooted_code(tree, w, vertex));
  }
  std::sort(children.begin(), children.end());
  std::string code = "(";
  for (const auto& c : children) code += c;
  code += ")";
  return code;
}

std::vector<int> centers(const TreeGraph& tree) {
  const int n = tree.vertex_count();
  if (n <= 2) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<int> degree(n);
  std::vector<int> leaves;
  for (int v = 0; v < n; ++v) {
    degree[v] = tree.degree(v);
    if (degree[v] <= 1) leaves.push_back(v);
  }
  int remaining = n;
  while (remaining > 2) {
    remaining -= static_cast<int>(leaves.size());
    std::vector<int> next;
    for (int leaf : leaves) {
      for (int w : tree.neighbors(leaf)) {
        if (--degree[w] == 1) next.push_back(w);
      }
    }
    leaves = std::move(next);
  }
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

// Relabels breadth-first from `root`, children visited in ascending code order.
TreeGraph relabel_canonically(const TreeGraph& tree, int root) {
  const int n = tree.vertex_count();
  std::vector<int> label(n, -1);
  std::vector<Edge> edges;
  std::deque<std::pair<int, int>> queue{{root, -1}};
  label[root] = 0;
  int next = 1;
  while (!queue.empty()) {
    auto [v, from] = queue.front();
    queue.pop_front();
    std::vector<std::pair<std::string, int>> children;
    for (int w : tree.neighbors(v)) {
      if (w != from) children.emplace_back(rooted_code(tree, w, v), w);
    }
    std::sort(children.begin(), children.end());
    for (const auto& [code, w] : children) {
      label[w] = next++;
      edges.push_back({label[v], label[w]});
      queue.emplace_back(w, v);
    }
  }
  return TreeGraph::from_edges(n, std::move(edges), 0);
}

}  // namespace

TreeGraph TreeGraph::from_edges(int vertex_count, std::vector<Edge> edges, int root) {
  if (vertex_count < 1) throw InvalidSizeError("tree must have at least one vertex");
  if (root < 0 || root >= vertex_count) {
    throw TreeError(TreeErrorKind::kRootOutOfRange,
                    "root " + std::to_string(root) + " out of range for " +
                        std::to_string(vertex_count) + " vertices");
  }
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count) {
      throw TreeError(TreeErrorKind::kVertexOutOfRange,
                      "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                          ") references a vertex outside 0.." + std::to_string(vertex_count - 1));
    }
    if (e.u == e.v) {
      throw TreeError(TreeErrorKind::kSelfLoop, "self loop at vertex " + std::to_string(e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    throw TreeError(TreeErrorKind::kDuplicateEdge, "duplicate edge (" + std::to_string(dup->u) +
                                                       "," + std::to_string(dup->v) + ")");
  }
  DisjointSets sets(vertex_count);
  for (const auto& e : edges) {
    if (!sets.unite(e.u, e.v)) {
      throw TreeError(TreeErrorKind::kCycle, "edge (" + std::to_string(e.u) + "," +
                                                 std::to_string(e.v) + ") closes a cycle");
    }
  }
  if (static_cast<int>(edges.size()) != vertex_count - 1) {
    throw TreeError(TreeErrorKind::kDisconnected, "edge set is not connected");
  }

  TreeGraph tree;
  tree.vertex_count_ = vertex_count;
  tree.root_ = root;
  tree.edges_ = std::move(edges);
  tree.neighbors_.assign(vertex_count, {});
  for (const auto& e : tree.edges_) {
    tree.neighbors_[e.u].push_back(e.v);
    tree.neighbors_[e.v].push_back(e.u);
  }
  for (auto& nb : tree.neighbors_) std::sort(nb.begin(), nb.end());

  tree.parent_.assign(vertex_count, -1);
  std::vector<bool> seen(vertex_count, false);
  std::deque<int> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : tree.neighbors_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        tree.parent_[w] = v;
        queue.push_back(w);
      }
    }
  }
  return tree;
}

TreeGraph build_chain(int vertex_count) {
  if (vertex_count < 2) {
    throw InvalidSizeError("chain needs at least 2 sites, got " + std::to_string(vertex_count));
  }
  std::vector<Edge> edges;
  for (int x = 0; x + 1 < vertex_count; ++x) edges.push_back({x, x + 1});
  return TreeGraph::from_edges(vertex_count, std::move(edges), 0);
}

TreeGraph parse_tree(const std::vector<Edge>& edges, int root) {
  int max_vertex = 0;
  for (const auto& e : edges) max_vertex = std::max({max_vertex, e.u, e.v});
  return TreeGraph::from_edges(max_vertex + 1, edges, root);
}

TreeGraph parse_tree(int vertex_count, const std::vector<Edge>& edges, int root) {
  return TreeGraph::from_edges(vertex_count, edges, root);
}

LineGraph line_graph(const TreeGraph& tree) {
  LineGraph g;
  g.tree_edges = tree.edges();
  const int m = g.vertex_count();
  g.adjacency = Eigen::MatrixXi::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const Edge& e = g.tree_edges[a];
      const Edge& f = g.tree_edges[b];
      if (e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v) {
        g.adjacency(a, b) = g.adjacency(b, a) = 1;
      }
    }
  }
  return g;
}

TreeGraph add_leaf(const TreeGraph& tree, int attach) {
  if (attach < 0 || attach >= tree.vertex_count()) {
    throw TreeError(TreeErrorKind::kVertexOutOfRange,
                    "attach vertex " + std::to_string(attach) + " out of range");
  }
  auto edges = tree.edges();
  edges.push_back({attach, tree.vertex_count()});
  return TreeGraph::from_edges(tree.vertex_count() + 1, std::move(edges), tree.root());
}

TreeGraph induced_subtree(const TreeGraph& tree, int vertex_count) {
  if (vertex_count < 1 || vertex_count > tree.vertex_count()) {
    throw InvalidSizeError("induced subtree size out of range");
  }
  if (tree.root() >= vertex_count) {
    throw TreeError(TreeErrorKind::kRootOutOfRange, "root not in induced vertex set");
  }
  std::vector<Edge> edges;
  for (const auto& e : tree.edges()) {
    if (e.v < vertex_count) edges.push_back(e);
  }
  return TreeGraph::from_edges(vertex_count, std::move(edges), tree.root());
}

bool is_leaf_extension(const TreeGraph& smaller, const TreeGraph& larger) {
  if (larger.vertex_count() != smaller.vertex_count() + 1) return false;
  if (larger.degree(smaller.vertex_count()) != 1) return false;
  return induced_subtree(larger, smaller.vertex_count()).edges() == smaller.edges();
}

std::string canonical_code(const TreeGraph& tree) {
  std::string best;
  for (int c : centers(tree)) {
    auto code = rooted_code(tree, c, -1);
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

std::vector<TreeGraph> enumerate_trees(int vertex_count) {
  if (vertex_count < 1) throw InvalidSizeError("tree enumeration needs at least one vertex");
  std::map<std::string, TreeGraph> level;
  auto single = TreeGraph::from_edges(1, {}, 0);
  level.emplace(canonical_code(single), single);
  for (int size = 2; size <= vertex_count; ++size) {
    std::map<std::string, TreeGraph> next;
    for (const auto& [code, tree] : level) {
      for (int v = 0; v < tree.vertex_count(); ++v) {
        auto grown = add_leaf(tree, v);
        auto grown_code = canonical_code(grown);
        if (!next.contains(grown_code)) {
          // Minimal-code center keeps the labelling a function of the class.
          int root = -1;
          for (int c : centers(grown)) {
            if (rooted_code(grown, c, -1) == grown_code) {
              root = c;
              break;
            }
          }
          next.emplace(grown_code, relabel_canonically(grown, root));
        }
      }
    }
    level = std::move(next);
  }
  std::vector<TreeGraph> out;
  out.reserve(level.size());
  for (auto& [code, tree] : level) out.push_back(std::move(tree));
  return out;
}

TreeGraph tree_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("tree file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges")) {
    throw InputError("tree file must be an object with \"vertices\" and \"edges\"");
  }
  try {
    const int vertices = doc.at("vertices").get<int>();
    std::vector<Edge> edges;
    for (const auto& pair : doc.at("edges")) {
      if (!pair.is_array() || pair.size() != 2) throw InputError("each edge must be [u, v]");
      edges.push_back({pair[0].get<int>(), pair[1].get<int>()});
    }
    const int root = doc.value("root", 0);
    return TreeGraph::from_edges(vertices, std::move(edges), root);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed tree file: ") + e.what());
  }
}

std::string tree_to_json(const TreeGraph& tree) {
  nlohmann::json doc;
  doc["vertices"] = tree.vertex_count();
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : tree.edges()) doc["edges"].push_back({e.u, e.v});
  doc["root"] = tree.root();
  return doc.dump();
}

}  // namespace foel
