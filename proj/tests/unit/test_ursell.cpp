#include <doctest.h>

#include <random>
#include <vector>

#include "bihc/ursell.hpp"

using namespace bihc;

namespace {

// Every labelled graph on n vertices, connected ones only.
template <class F>
void for_each_connected_graph(int n, F&& visit) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  const unsigned total = 1u << pairs.size();
  for (unsigned mask = 0; mask < total; ++mask) {
    SmallGraph h(n);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (mask >> i & 1u) h.add_edge(pairs[i].first, pairs[i].second);
    if (h.connected()) visit(h);
  }
}

}  // namespace

TEST_CASE("small Ursell values") {
  CHECK(ursell(SmallGraph::complete(1)) == Rational(1));
  CHECK(ursell(SmallGraph::complete(2)) == Rational(-1, 2));
  CHECK(ursell(SmallGraph::complete(3)) == Rational(1, 3));
  CHECK(ursell(SmallGraph::cycle(4)) == Rational(-1, 8));
}

TEST_CASE("complete graphs give (-1)^{k-1}/k") {
  for (int k = 1; k <= 8; ++k) {
    const Rational expected(k % 2 == 1 ? 1 : -1, k);
    CHECK(ursell(SmallGraph::complete(k)) == expected);
  }
}

TEST_CASE("both implementations agree on every connected graph up to 6 vertices") {
  for (int n = 1; n <= 6; ++n) {
    int graphs = 0;
    for_each_connected_graph(n, [&](const SmallGraph& h) {
      ++graphs;
      CHECK(signed_connected_sum_edge_subsets(h) == signed_connected_sum_deletion_contraction(h));
    });
    CHECK(graphs > 0);
  }
}

TEST_CASE("trees have signed sum (-1)^{n-1}") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 10; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      SmallGraph tree(n);
      for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        tree.add_edge(v, parent(rng));
      }
      const std::int64_t expected = (n - 1) % 2 == 0 ? 1 : -1;
      CHECK(signed_connected_sum_deletion_contraction(tree) == expected);
      if (n <= 7) CHECK(signed_connected_sum_edge_subsets(tree) == expected);
    }
  }
}

TEST_CASE("disconnected or oversized graphs are rejected") {
  SmallGraph two(2);
  CHECK_THROWS_AS(ursell(two), std::invalid_argument);
  CHECK_THROWS(ursell(SmallGraph::complete(kMaxUrsellVertices + 1)));
}

TEST_CASE("multiplicity table agrees with expanded graphs") {
  // Random type graphs; multiplicities expand into mutually adjacent copies.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> types_dist(1, 3);
    const int t = types_dist(rng);
    std::vector<std::uint32_t> adjacency(static_cast<std::size_t>(t));
    std::bernoulli_distribution coin(0.6);
    for (int i = 0; i < t; ++i)
      for (int j = i + 1; j < t; ++j)
        if (coin(rng)) {
          adjacency[static_cast<std::size_t>(i)] |= 1u << j;
          adjacency[static_cast<std::size_t>(j)] |= 1u << i;
        }
    std::vector<int> mult(static_cast<std::size_t>(t));
    std::uniform_int_distribution<int> m_dist(1, 3);
    int total = 0;
    for (auto& m : mult) total += (m = m_dist(rng));

    SmallGraph h(total);
    std::vector<int> type_of;
    for (int i = 0; i < t; ++i)
      for (int c = 0; c < mult[static_cast<std::size_t>(i)]; ++c) type_of.push_back(i);
    for (int a = 0; a < total; ++a)
      for (int b = a + 1; b < total; ++b) {
        const int ta = type_of[static_cast<std::size_t>(a)];
        const int tb = type_of[static_cast<std::size_t>(b)];
        if (ta == tb || (adjacency[static_cast<std::size_t>(ta)] >> tb & 1u)) h.add_edge(a, b);
      }
    if (!h.connected()) continue;
    CHECK(cluster_signed_sum(adjacency, mult) == signed_connected_sum_deletion_contraction(h));
  }
}

TEST_CASE("multiplicity table reaches the slot cap") {
  // K_20 as 20 copies of one polymer: (-1)^{19} 19!.
  const std::vector<std::uint32_t> adjacency{0u};
  const std::vector<int> mult{20};
  CHECK(cluster_signed_sum(adjacency, mult) == -factorial(19));
}
