#include "bihc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "bihc/cumulants.hpp"
#include "bihc/errors.hpp"
#include "bihc/numeric.hpp"

namespace bihc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_size(const BipartiteGraph& g, int cap) {
  if (g.n_vertices() > cap) {
    throw SizeCapExceeded("exact enumeration supports at most " + std::to_string(cap) +
                          " vertices, got " + std::to_string(g.n_vertices()));
  }
}

std::vector<std::uint64_t> flat_adjacency(const BipartiteGraph& g) {
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.n_vertices()), 0);
  for (auto [u, v] : g.edges()) {
    const int a = g.flat_id(left(u));
    const int b = g.flat_id(right(v));
    adj[static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
    adj[static_cast<std::size_t>(b)] |= std::uint64_t{1} << a;
  }
  return adj;
}

// Lowest connected component of the mask.
std::uint64_t component_of_lowest(std::uint64_t mask, const std::vector<std::uint64_t>& adj) {
  std::uint64_t seen = mask & (~mask + 1);
  std::uint64_t frontier = seen;
  while (frontier) {
    std::uint64_t next = 0;
    for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
    next &= mask;
    frontier = next & ~seen;
    seen |= next;
  }
  return seen;
}

int max_degree_vertex(std::uint64_t mask, const std::vector<std::uint64_t>& adj) {
  int best = std::countr_zero(mask);
  int best_deg = -1;
  for (std::uint64_t f = mask; f; f &= f - 1) {
    const int v = std::countr_zero(f);
    const int deg = std::popcount(adj[static_cast<std::size_t>(v)] & mask);
    if (deg > best_deg) {
      best_deg = deg;
      best = v;
    }
  }
  return best;
}

}  // namespace

HardCoreOracle::HardCoreOracle(const BipartiteGraph& g, const RealFugacities& lam)
    : g_(g), lam_(lam) {
  require_size(g, kMaxExactVertices);
  validate(lam);
  adj_ = flat_adjacency(g);
  closed_.resize(adj_.size());
  log_weight_.resize(adj_.size());
  for (int v = 0; v < g.n_vertices(); ++v) {
    closed_[static_cast<std::size_t>(v)] = adj_[static_cast<std::size_t>(v)] | (std::uint64_t{1} << v);
    const double w = v < g.n_left() ? lam.lambda_L : lam.lambda_R;
    log_weight_[static_cast<std::size_t>(v)] = w > 0.0 ? std::log(w) : kNegInf;
  }
}

std::uint64_t HardCoreOracle::full_mask() const {
  const int n = g_.n_vertices();
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

double HardCoreOracle::log_Z(std::uint64_t mask) {
  double total = 0.0;
  while (mask) {
    const std::uint64_t comp = component_of_lowest(mask, adj_);
    mask &= ~comp;
    total += branch(comp);
  }
  return total;
}

// Z(S) = Z(S - v) + lambda_v Z(S - N[v]) on a connected S.
double HardCoreOracle::branch(std::uint64_t mask) {
  if (std::popcount(mask) == 1) {
    return std::log1p(std::exp(log_weight_[static_cast<std::size_t>(std::countr_zero(mask))]));
  }
  if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
  const int v = max_degree_vertex(mask, adj_);
  const double without = log_Z(mask & ~(std::uint64_t{1} << v));
  const double lw = log_weight_[static_cast<std::size_t>(v)];
  const double with = lw == kNegInf ? kNegInf : lw + log_Z(mask & ~closed_[static_cast<std::size_t>(v)]);
  const double result = log_add_exp(without, with);
  memo_.emplace(mask, result);
  return result;
}

double HardCoreOracle::marginal(const VertexSet& a) {
  VertexSet members = a;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::uint64_t removed = 0;
  double log_weight = 0.0;
  for (const Vertex& x : members) {
    if (!g_.contains(x)) throw std::invalid_argument("vertex out of range");
    const int f = g_.flat_id(x);
    if ((removed >> f) & 1u) return 0.0;  // adjacent to an earlier member
    removed |= closed_[static_cast<std::size_t>(f)];
    log_weight += log_weight_[static_cast<std::size_t>(f)];
  }
  if (log_weight == kNegInf) return 0.0;
  return std::exp(log_weight + log_Z(full_mask() & ~removed) - log_Z());
}

SignedLog exact_Z(const BipartiteGraph& g, const RealFugacities& lam) {
  HardCoreOracle oracle(g, lam);
  return {1, oracle.log_Z()};
}

double exact_log_Z(const BipartiteGraph& g, const RealFugacities& lam) {
  return exact_Z(g, lam).log_abs;
}

std::complex<double> exact_Z(const BipartiteGraph& g, const ComplexFugacities& lam) {
  require_size(g, kMaxComplexVertices);
  const auto adj = flat_adjacency(g);
  std::unordered_map<std::uint64_t, std::complex<double>> memo;
  const auto weight = [&](int v) { return v < g.n_left() ? lam.lambda_L : lam.lambda_R; };

  std::function<std::complex<double>(std::uint64_t)> z = [&](std::uint64_t mask) {
    std::complex<double> product(1.0);
    while (mask) {
      const std::uint64_t comp = component_of_lowest(mask, adj);
      mask &= ~comp;
      if (std::popcount(comp) == 1) {
        product *= 1.0 + weight(std::countr_zero(comp));
        continue;
      }
      auto it = memo.find(comp);
      if (it == memo.end()) {
        const int v = max_degree_vertex(comp, adj);
        const std::uint64_t closed = adj[static_cast<std::size_t>(v)] | (std::uint64_t{1} << v);
        const std::complex<double> value =
            z(comp & ~(std::uint64_t{1} << v)) + weight(v) * z(comp & ~closed);
        it = memo.emplace(comp, value).first;
      }
      product *= it->second;
    }
    return product;
  };
  const int n = g.n_vertices();
  return z(n == 0 ? 0 : (std::uint64_t{1} << n) - 1);
}

namespace {

struct PolymerMasks {
  std::vector<std::uint64_t> own;
  std::vector<std::uint64_t> blocked;  // own vertices and their 2-linked neighbors
  std::vector<double> weight;
  std::vector<Polymer> polymers;
};

PolymerMasks polymer_masks(const BipartiteGraph& g, const RealFugacities& lam) {
  if (g.n_right() > kMaxExactXiRight) {
    throw SizeCapExceeded("exact polymer sums support at most " +
                          std::to_string(kMaxExactXiRight) + " right vertices");
  }
  validate(lam);
  PolymerMasks pm;
  pm.polymers = enumerate_all_polymers(g, g.n_right());
  const TwoLinkedAdjacency adj(g);
  for (const Polymer& p : pm.polymers) {
    std::uint64_t own = 0;
    std::uint64_t blocked = 0;
    for (int r : p.vertices) {
      own |= std::uint64_t{1} << r;
      blocked |= std::uint64_t{1} << r;
      for (int nb : adj.neighbors(r)) blocked |= std::uint64_t{1} << nb;
    }
    pm.own.push_back(own);
    pm.blocked.push_back(blocked);
    pm.weight.push_back(p.weight(lam));
  }
  return pm;
}

// Visits every pairwise-compatible collection once, as increasing index lists.
void for_each_compatible(const PolymerMasks& pm,
                         const std::function<void(const std::vector<int>&, double)>& visit) {
  std::vector<int> chosen;
  const std::size_t n = pm.own.size();
  std::function<void(std::size_t, std::uint64_t, double)> dfs = [&](std::size_t start,
                                                                    std::uint64_t available,
                                                                    double weight) {
    visit(chosen, weight);
    for (std::size_t j = start; j < n; ++j) {
      if ((pm.own[j] & ~available) == 0) {
        chosen.push_back(static_cast<int>(j));
        dfs(j + 1, available & ~pm.blocked[j], weight * pm.weight[j]);
        chosen.pop_back();
      }
    }
  };
  dfs(0, ~std::uint64_t{0}, 1.0);
}

}  // namespace

double exact_Xi(const BipartiteGraph& g, const RealFugacities& lam) {
  if (lam.lambda_R == 0.0) {
    validate(lam);
    return 1.0;
  }
  const PolymerMasks pm = polymer_masks(g, lam);
  CompensatedSum<double> sum;
  for_each_compatible(pm, [&](const std::vector<int>&, double w) { sum.add(w); });
  return sum.value();
}

double exact_log_Xi(const BipartiteGraph& g, const RealFugacities& lam) {
  return std::log(exact_Xi(g, lam));
}

double exact_marginal(const BipartiteGraph& g, const RealFugacities& lam, const VertexSet& a) {
  HardCoreOracle oracle(g, lam);
  return oracle.marginal(a);
}

std::map<VertexSet, double> exact_distribution(const BipartiteGraph& g,
                                               const RealFugacities& lam) {
  require_size(g, kMaxTableVertices);
  HardCoreOracle oracle(g, lam);
  const double log_z = oracle.log_Z();
  const int n = g.n_vertices();
  std::map<VertexSet, double> table;
  VertexSet current;
  std::function<void(int, std::uint64_t, double)> dfs = [&](int v, std::uint64_t blocked,
                                                            double log_w) {
    if (v == n) {
      table.emplace(current, std::exp(log_w - log_z));
      return;
    }
    dfs(v + 1, blocked, log_w);
    const double lw = (v < g.n_left() ? lam.lambda_L : lam.lambda_R);
    if (!((blocked >> v) & 1u) && lw > 0.0) {
      current.push_back(g.from_flat_id(v));
      dfs(v + 1, blocked | oracle.closed_neighborhood(v), log_w + std::log(lw));
      current.pop_back();
    }
  };
  dfs(0, 0, 0.0);
  return table;
}

std::map<PolymerConfigKey, double> exact_nu(const BipartiteGraph& g, const RealFugacities& lam) {
  require_size(g, kMaxTableVertices);
  std::map<PolymerConfigKey, double> table;
  if (lam.lambda_R == 0.0) {
    validate(lam);
    table.emplace(PolymerConfigKey{}, 1.0);
    return table;
  }
  const PolymerMasks pm = polymer_masks(g, lam);
  CompensatedSum<double> xi;
  for_each_compatible(pm, [&](const std::vector<int>& chosen, double w) {
    PolymerConfigKey key;
    for (int i : chosen) key.push_back(pm.polymers[static_cast<std::size_t>(i)].vertices);
    std::sort(key.begin(), key.end());
    table.emplace(std::move(key), w);
    xi.add(w);
  });
  const double total = xi.value();
  for (auto& [key, p] : table) p /= total;
  return table;
}

double exact_cumulant(HardCoreOracle& oracle, const VertexSet& a) {
  VertexSet sorted = a;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("cumulant set has repeated vertices");
  }
  if (sorted.empty() || sorted.size() > static_cast<std::size_t>(kMaxPartitionSet)) {
    throw std::invalid_argument("cumulant set size must be 1..8");
  }
  SubsetValues mu;
  const std::uint32_t subsets = 1u << sorted.size();
  for (std::uint32_t s = 1; s < subsets; ++s) {
    VertexSet subset;
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if ((s >> i) & 1u) subset.push_back(sorted[i]);
    mu.emplace(subset, oracle.marginal(subset));
  }
  return cumulants_from_moments(mu, sorted);
}

double exact_cumulant(const BipartiteGraph& g, const RealFugacities& lam, const VertexSet& a) {
  HardCoreOracle oracle(g, lam);
  return exact_cumulant(oracle, a);
}

}  // namespace bihc
