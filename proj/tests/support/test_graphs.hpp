#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "bihc/graph.hpp"

namespace bihc::testing {

inline BipartiteGraph k11() { return complete_bipartite(1, 1); }
inline BipartiteGraph k12() { return star_center_left(2); }

// Erdos-Renyi bipartite graph; sides drawn from [1, max_side].
inline BipartiteGraph random_bipartite(std::mt19937_64& rng, int max_side, double p) {
  std::uniform_int_distribution<int> side(1, max_side);
  std::bernoulli_distribution coin(p);
  const int n_l = side(rng);
  const int n_r = side(rng);
  std::vector<BipartiteGraph::Edge> edges;
  for (int u = 0; u < n_l; ++u)
    for (int v = 0; v < n_r; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  return BipartiteGraph(n_l, n_r, std::move(edges));
}

// Random graph whose every R vertex has degree exactly d_r, so delta_R is
// controlled; left degrees vary.
inline BipartiteGraph random_right_regular(std::mt19937_64& rng, int n_l, int n_r, int d_r) {
  std::vector<BipartiteGraph::Edge> edges;
  std::vector<int> lefts(static_cast<std::size_t>(n_l));
  for (int u = 0; u < n_l; ++u) lefts[static_cast<std::size_t>(u)] = u;
  for (int v = 0; v < n_r; ++v) {
    std::shuffle(lefts.begin(), lefts.end(), rng);
    for (int i = 0; i < d_r; ++i) edges.emplace_back(lefts[static_cast<std::size_t>(i)], v);
  }
  return BipartiteGraph(n_l, n_r, std::move(edges));
}

}  // namespace bihc::testing
