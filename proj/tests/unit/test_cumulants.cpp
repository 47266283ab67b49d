#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "bihc/cumulants.hpp"
#include "bihc/errors.hpp"
#include "bihc/oracle.hpp"
#include "test_graphs.hpp"

using namespace bihc;

namespace {

std::vector<VertexSet> nonempty_subsets(const VertexSet& a) {
  std::vector<VertexSet> out;
  for (unsigned mask = 1; mask < (1u << a.size()); ++mask) {
    VertexSet s;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (mask >> i & 1u) s.push_back(a[i]);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("set partitions") {
  for (int n = 1; n <= 8; ++n) {
    std::uint64_t seen = 0;
    std::set<std::vector<int>> distinct;
    for_each_set_partition(n, [&](const std::vector<int>& block_of, int) {
      ++seen;
      distinct.insert(block_of);
    });
    CHECK(seen == bell_number(n));
    CHECK(distinct.size() == seen);
  }
  CHECK(bell_number(6) == 203);
}

TEST_CASE("moments and cumulants on one and two points") {
  const Vertex u = right(0), v = right(1);
  SubsetValues kappa{{{u}, 0.3}, {{v}, 0.4}, {{u, v}, -0.05}};
  CHECK(moments_from_cumulants(kappa, {u}) == 0.3);
  CHECK(moments_from_cumulants(kappa, {u, v}) == doctest::Approx(-0.05 + 0.12));

  SubsetValues mu{{{u}, 0.3}, {{v}, 0.4}, {{u, v}, 0.12}};
  CHECK(cumulants_from_moments(mu, {u}) == 0.3);
  CHECK(std::abs(cumulants_from_moments(mu, {u, v})) <= 1e-15);
}

TEST_CASE("round trip on random inputs") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int size = 1; size <= 6; ++size) {
    VertexSet a;
    for (int i = 0; i < size; ++i) a.push_back(right(i));
    const auto subsets = nonempty_subsets(a);
    SubsetValues mu;
    for (const auto& s : subsets) mu[s] = val(rng);
    SubsetValues kappa;
    for (const auto& s : subsets) kappa[s] = cumulants_from_moments(mu, s);
    for (const auto& s : subsets) CHECK(moments_from_cumulants(kappa, s) == doctest::Approx(mu[s]).epsilon(1e-10));
  }
}

TEST_CASE("oracle moments on C_6 round trip") {
  const BipartiteGraph g = even_cycle(6);
  HardCoreOracle oracle(g, {0.9, 1.7});
  const VertexSet a{left(0), left(2), right(0), right(1)};
  SubsetValues mu;
  for (const auto& s : nonempty_subsets(a)) mu[s] = oracle.marginal(s);
  SubsetValues kappa;
  for (const auto& s : nonempty_subsets(a)) kappa[s] = cumulants_from_moments(mu, s);
  for (const auto& s : nonempty_subsets(a)) CHECK(moments_from_cumulants(kappa, s) == doctest::Approx(mu[s]).epsilon(1e-10));
}

TEST_CASE("decay constant matches its closed form") {
  for (double eta : {0.05, 0.1, 0.5}) {
    for (int a = 1; a <= 4; ++a) {
      const double closed = std::pow(1.0 - std::exp(-eta), -2.0 * a);
      CHECK(cumulant_decay_constant(eta, a) == doctest::Approx(closed).epsilon(1e-10));
    }
  }
  CHECK(indicator_cumulant_bound(1) == 1.0);
  CHECK(indicator_cumulant_bound(2) == 2.0);
  CHECK(indicator_cumulant_bound(3) == 6.0);
}

TEST_CASE("tail bounds shrink with m") {
  double previous = INFINITY;
  for (int m = 2; m <= 20; ++m) {
    const double t = cumulant_tail_bound(0.1, 2, 4, m);
    CHECK(t <= previous);
    CHECK(t > 0.0);
    previous = t;
  }
}

TEST_CASE("truncated cumulants") {
  const RealFugacities one{1.0, 1.0};
  const CumulantQuery single = truncated_cumulant(testing::k11(), one, {right(0)}, 8);
  // w = 1/2; the series sum_{k<m} (-1)^{k+1} w^k approaches mu_v = 1/3.
  double partial = 0.0;
  for (int k = 1; k < 8; ++k) partial += (k % 2 == 1 ? 1.0 : -1.0) * std::pow(0.5, k);
  CHECK(single.value == doctest::Approx(partial).epsilon(1e-12));
  CHECK(std::abs(single.value - 1.0 / 3) < 0.01);
  CHECK(std::isinf(single.tail_bound));

  const BipartiteGraph two = disjoint_union(testing::k11(), testing::k11());
  for (int m = 1; m <= 6; ++m)
    CHECK(truncated_cumulant(two, {50.0, 0.1}, {right(0), right(1)}, m).value == 0.0);

  CHECK_THROWS_AS(truncated_cumulant(testing::k11(), one, {left(0)}, 4), std::invalid_argument);
}

TEST_CASE("truncated cumulants approach oracle cumulants within the tail bound") {
  const BipartiteGraph g = even_cycle(12);
  const RealFugacities lam{50.0, 0.1};
  HardCoreOracle oracle(g, lam);
  const std::vector<VertexSet> sets{{right(0)}, {right(0), right(1)}, {right(0), right(2)},
                                    {right(0), right(1), right(2)}};
  for (const auto& a : sets) {
    const double exact = exact_cumulant(oracle, a);
    for (int m = 2; m <= 8; ++m) {
      const CumulantQuery q = truncated_cumulant(g, lam, a, m);
      CHECK(std::isfinite(q.tail_bound));
      CHECK(std::abs(q.value - exact) <= q.tail_bound);
    }
  }
}

TEST_CASE("decay experiment rows") {
  const BipartiteGraph g = disjoint_union(even_cycle(8), even_cycle(8));
  const RealFugacities lam{50.0, 0.1};
  std::vector<DecayQuery> queries{
      {{right(0)}, {right(4)}},             // across components
      {{right(0)}, {right(2)}},             // distance 4
      {{right(0), right(1)}, {}},           // cumulant
      {{left(0), right(0)}, {right(2)}},    // sets
  };
  const auto rows = decay_experiment(g, lam, queries, 6);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].kind == "pair");
  CHECK(rows[0].distance_or_mst == kInfinity);
  CHECK(rows[0].value == 0.0);
  CHECK(rows[0].bound > 0.0);
  CHECK(rows[1].distance_or_mst == 4);
  CHECK(rows[2].kind == "cumulant");
  CHECK(rows[3].kind == "sets");
  for (const auto& row : rows) CHECK(row.satisfied);

  std::ostringstream csv;
  write_decay_csv(csv, rows);
  CHECK(csv.str().rfind("query_id,kind,distance_or_mst,value,bound,satisfied\n", 0) == 0);
  CHECK(csv.str().find("inf") != std::string::npos);

  CHECK_THROWS_AS(decay_experiment(testing::k12(), {1.0, 1.0}, queries, 4), CertificationError);
}
