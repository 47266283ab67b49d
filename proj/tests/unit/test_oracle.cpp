#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>

#include "bihc/oracle.hpp"
#include "bihc/errors.hpp"
#include "test_graphs.hpp"

using namespace bihc;
using testing::k11;
using testing::k12;

namespace {

// Direct sum over all 2^n vertex subsets.
double brute_Z(const BipartiteGraph& g, const RealFugacities& lam) {
  const int n = g.n_vertices();
  double z = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    VertexSet set;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) set.push_back(g.from_flat_id(i));
    if (!is_independent(g, set)) continue;
    double w = 1.0;
    for (const Vertex& v : set) w *= v.side == Side::Left ? lam.lambda_L : lam.lambda_R;
    z += w;
  }
  return z;
}

}  // namespace

TEST_CASE("small partition functions") {
  CHECK(exact_Z(k11(), RealFugacities{2.0, 3.0}).value() == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(exact_Z(k12(), RealFugacities{1.0, 1.0}).value() == doctest::Approx(5.0).epsilon(1e-14));
  const BipartiteGraph u = disjoint_union(k11(), k12());
  CHECK(exact_Z(u, RealFugacities{1.0, 1.0}).value() == doctest::Approx(15.0).epsilon(1e-14));
}

TEST_CASE("oracle matches brute force") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> fug(0.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const BipartiteGraph g = testing::random_bipartite(rng, 6, 0.35);
    const RealFugacities lam{fug(rng), fug(rng)};
    CHECK(exact_log_Z(g, lam) == doctest::Approx(std::log(brute_Z(g, lam))).epsilon(1e-12));
  }
}

TEST_CASE("polymer partition function") {
  CHECK(exact_Xi(k12(), RealFugacities{1.0, 1.0}) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(exact_Xi(k12(), RealFugacities{4.0, 0.0}) == 1.0);
  CHECK(exact_Xi(k11(), RealFugacities{10.0, 0.1}) == doctest::Approx(1 + 0.1 / 11).epsilon(1e-15));
}

TEST_CASE("Z = (1 + lambda_L)^{n_L} Xi") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> fug(0.01, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const BipartiteGraph g = testing::random_bipartite(rng, 8, 0.3);
    const RealFugacities lam{fug(rng), fug(rng)};
    const double lhs = exact_log_Z(g, lam);
    const double rhs = g.n_left() * std::log1p(lam.lambda_L) + exact_log_Xi(g, lam);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("component factorization") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const BipartiteGraph a = testing::random_bipartite(rng, 5, 0.4);
    const BipartiteGraph b = testing::random_bipartite(rng, 5, 0.4);
    const RealFugacities lam{1.3, 0.7};
    CHECK(exact_log_Z(disjoint_union(a, b), lam) ==
          doctest::Approx(exact_log_Z(a, lam) + exact_log_Z(b, lam)).epsilon(1e-12));
  }
}

TEST_CASE("complex mode matches real mode at real points") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const BipartiteGraph g = testing::random_bipartite(rng, 6, 0.4);
    const RealFugacities lam{0.8, 1.9};
    const std::complex<double> z = exact_Z(g, to_complex(lam));
    const double real = exact_Z(g, lam).value();
    CHECK(std::abs(z - real) <= 1e-12 * real);
  }
  // Z of K_{1,1} at lambda_L = -12, lambda_R = 0.1 is 1 - 12 + 0.1.
  const std::complex<double> z = exact_Z(k11(), ComplexFugacities{{-12.0, 0.0}, {0.1, 0.0}});
  CHECK(z.real() == doctest::Approx(-10.9));
}

TEST_CASE("monotone in each fugacity") {
  const BipartiteGraph g = even_cycle(10);
  CHECK(exact_log_Z(g, {1.0, 1.0}) < exact_log_Z(g, {1.1, 1.0}));
  CHECK(exact_log_Z(g, {1.0, 1.0}) < exact_log_Z(g, {1.0, 1.1}));
}

TEST_CASE("marginals") {
  const RealFugacities one{1.0, 1.0};
  CHECK(exact_marginal(k11(), one, {right(0)}) == doctest::Approx(1.0 / 3));
  CHECK(exact_marginal(k11(), one, {}) == 1.0);
  CHECK(exact_marginal(k11(), one, {left(0), right(0)}) == 0.0);
  CHECK(exact_marginal(k12(), one, {right(0), right(1)}) == doctest::Approx(0.2));
}

TEST_CASE("distribution tables") {
  const auto dist = exact_distribution(k11(), {1.0, 1.0});
  REQUIRE(dist.size() == 3);
  for (const auto& [set, p] : dist) CHECK(p == doctest::Approx(1.0 / 3));

  const auto big = exact_distribution(even_cycle(12), {2.0, 0.5});
  double total = 0.0;
  for (const auto& [set, p] : big) total += p;
  CHECK(std::abs(total - 1.0) <= 1e-12);

  CHECK_THROWS_AS(exact_distribution(even_cycle(16), {1.0, 1.0}), SizeCapExceeded);
}

TEST_CASE("pushing polymer configurations forward gives the hard-core distribution") {
  // Each configuration extends by independent L coins with bias
  // lambda_L / (1 + lambda_L) on unblocked left vertices.
  const BipartiteGraph g(3, 4, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 3}});
  const RealFugacities lam{0.7, 1.6};
  const auto nu = exact_nu(g, lam);
  const auto dist = exact_distribution(g, lam);
  std::map<VertexSet, double> pushed;
  const double q = lam.lambda_L / (1.0 + lam.lambda_L);
  for (const auto& [config, p] : nu) {
    VertexSet right_part;
    std::vector<char> blocked(static_cast<std::size_t>(g.n_left()), 0);
    for (const auto& poly : config)
      for (int r : poly) {
        right_part.push_back(right(r));
        for (int u : g.neighbors_of_right(r)) blocked[static_cast<std::size_t>(u)] = 1;
      }
    std::vector<int> free;
    for (int u = 0; u < g.n_left(); ++u)
      if (!blocked[static_cast<std::size_t>(u)]) free.push_back(u);
    for (unsigned mask = 0; mask < (1u << free.size()); ++mask) {
      VertexSet set = right_part;
      double w = p;
      for (std::size_t i = 0; i < free.size(); ++i) {
        if (mask >> i & 1u) {
          set.push_back(left(free[i]));
          w *= q;
        } else {
          w *= 1.0 - q;
        }
      }
      std::sort(set.begin(), set.end());
      pushed[set] += w;
    }
  }
  REQUIRE(pushed.size() == dist.size());
  for (const auto& [set, p] : dist) CHECK(pushed[set] == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("exact cumulants") {
  const BipartiteGraph g = even_cycle(8);
  const RealFugacities lam{1.5, 0.8};
  HardCoreOracle oracle(g, lam);
  const double mu_u = oracle.marginal({right(0)});
  const double mu_v = oracle.marginal({right(2)});
  const double mu_uv = oracle.marginal({right(0), right(2)});
  CHECK(exact_cumulant(oracle, {right(0)}) == doctest::Approx(mu_u).epsilon(1e-12));
  CHECK(std::abs(exact_cumulant(oracle, {right(0), right(2)}) - (mu_uv - mu_u * mu_v)) <= 1e-12);

  const BipartiteGraph two = disjoint_union(g, g);
  CHECK(std::abs(exact_cumulant(two, lam, {right(0), right(5)})) <= 1e-12);
  CHECK(std::abs(exact_cumulant(two, lam, {left(0), right(1), right(6)})) <= 1e-12);
}

TEST_CASE("size caps") {
  CHECK_THROWS_AS(exact_Z(even_cycle(32), RealFugacities{1.0, 1.0}), SizeCapExceeded);
  CHECK_NOTHROW(exact_Z(even_cycle(30), RealFugacities{1.0, 1.0}));
  CHECK_THROWS_AS(exact_Z(even_cycle(26), ComplexFugacities{1.0, 1.0}), SizeCapExceeded);
}
