#include <doctest.h>

#include <random>

#include "bihc/errors.hpp"
#include "bihc/graph.hpp"
#include "test_graphs.hpp"

using namespace bihc;

TEST_CASE("load_graph parses stars and single edges") {
  const BipartiteGraph star = load_graph("1 2\n0 0\n0 1");
  CHECK(star.n_left() == 1);
  CHECK(star.n_right() == 2);
  CHECK(star.degree(left(0)) == 2);
  CHECK(star == star_center_left(2));

  const BipartiteGraph edge = load_graph("1 1\n0 0");
  CHECK(edge.n_edges() == 1);
  CHECK(edge.has_edge(0, 0));
}

TEST_CASE("load_graph reports the offending line") {
  try {
    load_graph("2 1\n0 0\n0 0");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(load_graph("1 1\n0 5"), ParseError);
  CHECK_THROWS_AS(load_graph("# nothing\n"), ParseError);
  CHECK_THROWS_AS(load_graph("1 1\n0 x"), ParseError);
}

TEST_CASE("comments and blank lines are ignored") {
  const BipartiteGraph g = load_graph("# header\n2 2\n\n0 0  # first\n1 1\n");
  CHECK(g.n_edges() == 2);
}

TEST_CASE("edge-list round trip") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const BipartiteGraph g = testing::random_bipartite(rng, 6, 0.4);
    CHECK(load_graph(to_edge_list(g)) == g);
  }
}

TEST_CASE("degree profiles") {
  const DegreeProfile p11 = degree_profile(complete_bipartite(1, 1));
  CHECK(p11.delta_L_max == 1);
  CHECK(p11.delta_R_min == 1);
  CHECK(p11.delta_R_max == 1);

  const DegreeProfile p12 = degree_profile(star_center_left(2));
  CHECK(p12.delta_L_max == 2);
  CHECK(p12.delta_R_min == 1);
  CHECK(p12.delta_R_max == 1);

  const DegreeProfile p35 = degree_profile(complete_bipartite(3, 5));
  CHECK(p35.delta_L_max == 5);
  CHECK(p35.delta_R_min == 3);
  CHECK(p35.delta_R_max == 3);
  CHECK(p35.in_class(5, 3, 3));
  CHECK_FALSE(p35.in_class(4, 3, 3));

  CHECK_THROWS_AS(degree_profile(BipartiteGraph(0, 3, {})), std::invalid_argument);
}

TEST_CASE("graph distance") {
  const BipartiteGraph star = star_center_left(2);  // r0 - c - r1
  const VertexSet a{right(0)}, b{right(1)};
  CHECK(graph_distance(star, a, b) == 2);
  CHECK(graph_distance(star, a, a) == 0);

  const BipartiteGraph two = disjoint_union(complete_bipartite(1, 1), complete_bipartite(1, 1));
  const VertexSet x{left(0)}, y{right(1)};
  CHECK(graph_distance(two, x, y) == kInfinity);
}

TEST_CASE("steiner tree sizes") {
  const BipartiteGraph star = star_center_left(3);
  const VertexSet one{right(1)};
  CHECK(steiner_tree_size(star, one) == 0);
  const VertexSet leaves{right(0), right(1), right(2)};
  CHECK(steiner_tree_size(star, leaves) == 3);

  const BipartiteGraph c12 = even_cycle(12);
  for (int i = 0; i < 6; ++i) {
    const VertexSet pair{right(0), right(i)};
    CHECK(steiner_tree_size(c12, pair) == graph_distance(c12, VertexSet{right(0)}, VertexSet{right(i)}));
  }
  const BipartiteGraph two = disjoint_union(complete_bipartite(1, 1), complete_bipartite(1, 1));
  CHECK(steiner_tree_size(two, VertexSet{right(0), right(1)}) == kInfinity);
}

TEST_CASE("families") {
  const BipartiteGraph s = star_center_left(2);
  CHECK(s.n_left() == 1);
  CHECK(s.n_right() == 2);

  const BipartiteGraph c6 = even_cycle(6);
  CHECK(c6.n_left() == 3);
  CHECK(c6.n_right() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(c6.degree(left(i)) == 2);
    CHECK(c6.degree(right(i)) == 2);
  }

  const BipartiteGraph b = random_biregular(2, 4, 4, 11);
  const DegreeProfile p = degree_profile(b);
  CHECK(p.delta_L_max == 2);
  CHECK(p.delta_R_min == 4);
  CHECK(p.delta_R_max == 4);
  CHECK(b.n_right() == 2);
  CHECK(random_biregular(2, 4, 4, 11) == b);

  CHECK(generate(family::Path{5}).n_vertices() == 5);
  CHECK_THROWS_AS(even_cycle(5), std::invalid_argument);
  CHECK_THROWS_AS(random_biregular(3, 2, 3, 0), std::invalid_argument);
}

TEST_CASE("components and independence") {
  const BipartiteGraph two = disjoint_union(star_center_left(2), complete_bipartite(1, 1));
  const auto labels = component_labels(two);
  CHECK(labels[static_cast<std::size_t>(two.flat_id(right(0)))] ==
        labels[static_cast<std::size_t>(two.flat_id(right(1)))]);
  CHECK(labels[static_cast<std::size_t>(two.flat_id(right(0)))] !=
        labels[static_cast<std::size_t>(two.flat_id(right(2)))]);
  CHECK(is_independent(two, VertexSet{right(0), right(1), left(1)}));
  CHECK_FALSE(is_independent(two, VertexSet{left(0), right(0)}));
}
