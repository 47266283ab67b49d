#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "bihc/polymer.hpp"
#include "test_graphs.hpp"

using namespace bihc;
using testing::k11;
using testing::k12;

namespace {

std::set<std::vector<int>> polymer_sets(const std::vector<Polymer>& ps) {
  std::set<std::vector<int>> out;
  for (const auto& p : ps) out.insert(p.vertices);
  return out;
}

}  // namespace

TEST_CASE("2-linked adjacency") {
  const TwoLinkedAdjacency star(k12());
  CHECK(star.adjacent(0, 1));
  CHECK(star.adjacent(1, 0));

  const TwoLinkedAdjacency two(disjoint_union(k11(), k11()));
  CHECK_FALSE(two.adjacent(0, 1));
  CHECK(two.max_degree() == 0);

  const TwoLinkedAdjacency c6(even_cycle(6));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK(c6.adjacent(a, b));
}

TEST_CASE("polymer weights") {
  const std::vector<int> v{0};
  CHECK(polymer_weight(k11(), std::span<const int>(v), RealFugacities{10.0, 0.1}) ==
        doctest::Approx(0.1 / 11).epsilon(1e-14));
  const std::vector<int> both{0, 1};
  CHECK(polymer_weight(k12(), std::span<const int>(both), RealFugacities{1.0, 1.0}) == 0.5);
  CHECK(polymer_weight(k12(), std::span<const int>(both), RealFugacities{3.0, 0.0}) == 0.0);

  const std::vector<int> apart{0, 1};
  CHECK_THROWS_AS(polymer_weight(disjoint_union(k11(), k11()), std::span<const int>(apart),
                                 RealFugacities{1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("polymer enumeration through a root") {
  CHECK(polymer_sets(enumerate_polymers(k11(), 0, 3)) == std::set<std::vector<int>>{{0}});
  CHECK(polymer_sets(enumerate_polymers(k12(), 0, 2)) ==
        std::set<std::vector<int>>{{0}, {0, 1}});
  CHECK(polymer_sets(enumerate_polymers(even_cycle(6), 0, 2)) ==
        std::set<std::vector<int>>{{0}, {0, 1}, {0, 2}});
}

TEST_CASE("enumeration matches brute force over subsets") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const BipartiteGraph g = testing::random_bipartite(rng, 7, 0.3);
    const TwoLinkedAdjacency adj(g);
    const int n = g.n_right();
    for (int k_max = 1; k_max <= 4; ++k_max) {
      std::set<std::vector<int>> brute;
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> members;
        for (int r = 0; r < n; ++r)
          if (mask >> r & 1u) members.push_back(r);
        if (static_cast<int>(members.size()) <= k_max && is_two_linked(adj, members)) {
          brute.insert(members);
        }
      }
      const auto all = enumerate_all_polymers(g, k_max);
      CHECK(polymer_sets(all) == brute);
      CHECK(all.size() == brute.size());
      for (const auto& p : all) CHECK(p.neighborhood_size == neighborhood_size(g, p.vertices));
    }
  }
}

TEST_CASE("enumeration respects an allowed mask") {
  const BipartiteGraph g = even_cycle(8);
  const auto ps = enumerate_all_polymers(g, 4, {1, 0, 1, 1});
  std::vector<Polymer> expected;
  for (const auto& p : enumerate_all_polymers(g, 4))
    if (!p.contains(1)) expected.push_back(p);
  CHECK(ps == expected);
}

TEST_CASE("compatibility") {
  const TwoLinkedAdjacency adj(k12());
  const Polymer r0{{0}, 1}, r1{{1}, 1};
  CHECK(incompatible(r0, r0, adj));
  CHECK(incompatible(r0, r1, adj));

  const TwoLinkedAdjacency apart(disjoint_union(k11(), k11()));
  CHECK_FALSE(incompatible(r0, r1, apart));
}

TEST_CASE("per-vertex summability sums") {
  const KPVertexSum single = kp_vertex_sum(k11(), 0, RealFugacities{10.0, 0.1}, 0.1, 1);
  CHECK(single.partial == doctest::Approx(0.1 / 11 * std::exp(0.6)).epsilon(1e-12));
  CHECK(single.bound == 0.5);
  CHECK(single.status == KPStatus::Satisfied);

  const KPVertexSum zero = kp_vertex_sum(k12(), 0, RealFugacities{1.0, 0.0}, 0.1, 6);
  CHECK(zero.partial == 0.0);
  CHECK(zero.status == KPStatus::Satisfied);

  const KPVertexSum star = kp_vertex_sum(k12(), 0, RealFugacities{1.0, 1.0}, 0.1, 6);
  CHECK(star.partial == doctest::Approx(0.5 * std::exp(0.6) + 0.5 * std::exp(1.2)).epsilon(1e-12));
  CHECK(star.partial == doctest::Approx(2.571).epsilon(1e-3));
  CHECK(star.status == KPStatus::Violated);
}

TEST_CASE("count bound dominates actual counts for small degrees") {
  // At fixed degrees the number of 2-linked k-sets through a vertex is at
  // most (e Delta_R (Delta_L - 1))^{k-1}.
  const BipartiteGraph g = even_cycle(16);
  for (int k = 1; k <= 6; ++k) {
    int exact_k = 0;
    for (const auto& p : enumerate_polymers(g, 0, k))
      if (p.size() == k) ++exact_k;
    CHECK(exact_k <= polymer_count_bound(2, 2, k) * std::pow(k, 1.5));
  }
}
