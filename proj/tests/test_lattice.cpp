#include <set>

#include "doctest.h"
#include "foel/errors.hpp"
#include "foel/lattice.hpp"

using namespace foel;

namespace {

TreeErrorKind kind_of(const std::vector<Edge>& edges, int vertices = -1, int root = 0) {
  try {
    if (vertices < 0) {
      parse_tree(edges, root);
    } else {
      parse_tree(vertices, edges, root);
    }
  } catch (const TreeError& e) {
    return e.kind();
  }
  FAIL("no TreeError thrown");
  return TreeErrorKind::kCycle;
}

TreeGraph star(int leaves) {
  std::vector<Edge> edges;
  for (int v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return parse_tree(edges);
}

}  // namespace

TEST_CASE("build_chain") {
  const auto two = build_chain(2);
  CHECK(two.edges() == std::vector<Edge>{{0, 1}});
  CHECK(two.root() == 0);

  const auto four = build_chain(4);
  CHECK(four.edges() == std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  CHECK(four.parent(2) == 1);
  CHECK(four.parent(0) == -1);

  const auto lg = line_graph(build_chain(3));
  CHECK(lg.vertex_count() == 2);
  CHECK(lg.edge_count() == 1);

  CHECK_THROWS_AS(build_chain(1), InvalidSizeError);
}

TEST_CASE("parse_tree examples and errors") {
  const auto s = parse_tree({{0, 1}, {0, 2}, {0, 3}}, 0);
  CHECK(s.vertex_count() == 4);
  CHECK(s.degree(0) == 3);
  CHECK(parse_tree({{0, 1}, {1, 2}}, 0) == build_chain(3));

  CHECK(kind_of({{0, 1}, {2, 3}}) == TreeErrorKind::kDisconnected);
  CHECK(kind_of({{0, 1}, {1, 2}, {2, 0}}) == TreeErrorKind::kCycle);
  CHECK(kind_of({{0, 1}, {1, 0}, {1, 2}}) == TreeErrorKind::kDuplicateEdge);
  CHECK(kind_of({{0, 1}, {1, 2}}, -1, 5) == TreeErrorKind::kRootOutOfRange);
  CHECK(kind_of({{0, 0}, {0, 1}}) == TreeErrorKind::kSelfLoop);
  CHECK(kind_of({{0, 4}}, 3) == TreeErrorKind::kVertexOutOfRange);
}

TEST_CASE("parent map is a breadth-first tree from the root") {
  const auto t = parse_tree({{0, 1}, {1, 2}, {1, 3}, {3, 4}}, 3);
  CHECK(t.parent(3) == -1);
  CHECK(t.parent(1) == 3);
  CHECK(t.parent(4) == 3);
  CHECK(t.parent(0) == 1);
  CHECK(t.parent(2) == 1);
}

TEST_CASE("chains round-trip through their edge lists") {
  for (int length = 2; length <= 20; ++length) {
    const auto chain = build_chain(length);
    CHECK(parse_tree(chain.edges(), 0) == chain);
  }
}

TEST_CASE("line graph examples") {
  const auto path = line_graph(build_chain(4));
  CHECK(path.vertex_count() == 3);
  CHECK(path.edge_count() == 2);
  CHECK(path.adjacency(0, 2) == 0);

  const auto triangle = line_graph(star(3));
  CHECK(triangle.vertex_count() == 3);
  CHECK(triangle.edge_count() == 3);

  const auto single = line_graph(build_chain(2));
  CHECK(single.vertex_count() == 1);
  CHECK(single.edge_count() == 0);
}

TEST_CASE("line graph matches a brute-force incidence check") {
  for (int size = 2; size <= 8; ++size) {
    for (const auto& tree : enumerate_trees(size)) {
      const auto lg = line_graph(tree);
      REQUIRE(lg.vertex_count() == size - 1);
      for (int a = 0; a < lg.vertex_count(); ++a) {
        for (int b = 0; b < lg.vertex_count(); ++b) {
          const Edge& e = lg.tree_edges[a];
          const Edge& f = lg.tree_edges[b];
          const bool share = a != b && (e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v);
          CHECK(lg.adjacency(a, b) == (share ? 1 : 0));
        }
      }
    }
  }
}

TEST_CASE("add_leaf") {
  CHECK(add_leaf(build_chain(3), 2) == build_chain(4));
  CHECK(add_leaf(build_chain(2), 1) == build_chain(3));
  CHECK(add_leaf(star(3), 0) == star(4));
  CHECK_THROWS(add_leaf(build_chain(3), 3));

  for (int size = 2; size <= 7; ++size) {
    for (const auto& tree : enumerate_trees(size)) {
      for (int v = 0; v < size; ++v) {
        const auto grown = add_leaf(tree, v);
        CHECK(grown.parent(size) == v);
        CHECK(induced_subtree(grown, size) == tree);
        CHECK(is_leaf_extension(tree, grown));
      }
    }
  }
  CHECK_FALSE(is_leaf_extension(build_chain(3), star(3)));
}

TEST_CASE("tree enumeration counts isomorphism classes") {
  const std::vector<std::size_t> expected{1, 1, 1, 2, 3, 6, 11, 23, 47};
  for (int size = 1; size <= 9; ++size) {
    const auto trees = enumerate_trees(size);
    CHECK(trees.size() == expected[size - 1]);
    std::set<std::string> codes;
    for (const auto& t : trees) {
      CHECK(t.vertex_count() == size);
      codes.insert(canonical_code(t));
    }
    CHECK(codes.size() == trees.size());
  }
}

TEST_CASE("canonical code ignores labels and root") {
  const auto a = parse_tree({{0, 1}, {1, 2}, {1, 3}, {3, 4}}, 0);
  const auto b = parse_tree({{4, 3}, {3, 2}, {3, 0}, {0, 1}}, 2);
  CHECK(canonical_code(a) == canonical_code(b));
  CHECK(canonical_code(build_chain(5)) != canonical_code(star(4)));
}

TEST_CASE("tree JSON round trip") {
  const auto t = parse_tree({{0, 1}, {1, 2}, {1, 3}}, 1);
  const auto back = tree_from_json(tree_to_json(t));
  CHECK(back == t);
  CHECK(tree_from_json(R"({"vertices": 3, "edges": [[0,1],[1,2]]})") == build_chain(3));
  CHECK_THROWS_AS(tree_from_json("{\"edges\": 3}"), Error);
  CHECK_THROWS_AS(tree_from_json(R"({"vertices": 4, "edges": [[0,1],[2,3]]})"), TreeError);
}
