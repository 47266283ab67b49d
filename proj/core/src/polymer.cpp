#include "bihc/polymer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bihc/connected_subsets.hpp"

namespace bihc {

void validate(const RealFugacities& lam) {
  if (!std::isfinite(lam.lambda_L) || !std::isfinite(lam.lambda_R) || lam.lambda_L < 0.0 ||
      lam.lambda_R < 0.0) {
    throw std::invalid_argument("real fugacities must be finite and nonnegative");
  }
}

void validate(const ComplexFugacities& lam) {
  if (1.0 + lam.lambda_L == std::complex<double>(0.0)) {
    throw std::invalid_argument("complex fugacities need 1 + lambda_L != 0");
  }
}

TwoLinkedAdjacency::TwoLinkedAdjacency(const BipartiteGraph& g) : adj_(g.n_right()) {
  for (int u = 0; u < g.n_left(); ++u) {
    const auto nbrs = g.neighbors_of_left(u);
    for (int a : nbrs)
      for (int b : nbrs)
        if (a != b) adj_[a].push_back(b);
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

bool TwoLinkedAdjacency::adjacent(int a, int b) const {
  return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
}

int TwoLinkedAdjacency::max_degree() const {
  std::size_t best = 0;
  for (const auto& list : adj_) best = std::max(best, list.size());
  return static_cast<int>(best);
}

bool Polymer::contains(int r) const {
  return std::binary_search(vertices.begin(), vertices.end(), r);
}

int neighborhood_size(const BipartiteGraph& g, std::span<const int> gamma) {
  std::vector<int> seen;
  for (int r : gamma) {
    const auto nbrs = g.neighbors_of_right(r);
    seen.insert(seen.end(), nbrs.begin(), nbrs.end());
  }
  std::sort(seen.begin(), seen.end());
  return static_cast<int>(std::unique(seen.begin(), seen.end()) - seen.begin());
}

bool is_two_linked(const TwoLinkedAdjacency& adj, std::span<const int> gamma) {
  if (gamma.empty()) return false;
  std::vector<int> members(gamma.begin(), gamma.end());
  std::sort(members.begin(), members.end());
  std::vector<char> reached(members.size(), 0);
  std::vector<std::size_t> stack{0};
  reached[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (int nb : adj.neighbors(members[i])) {
      auto it = std::lower_bound(members.begin(), members.end(), nb);
      if (it == members.end() || *it != nb) continue;
      const auto j = static_cast<std::size_t>(it - members.begin());
      if (!reached[j]) {
        reached[j] = 1;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == members.size();
}

Polymer make_polymer(const BipartiteGraph& g, const TwoLinkedAdjacency& adj,
                     std::vector<int> gamma) {
  if (gamma.empty()) throw std::invalid_argument("polymer must be nonempty");
  std::sort(gamma.begin(), gamma.end());
  if (std::adjacent_find(gamma.begin(), gamma.end()) != gamma.end()) {
    throw std::invalid_argument("polymer has repeated vertices");
  }
  for (int r : gamma) {
    if (r < 0 || r >= g.n_right()) throw std::invalid_argument("polymer vertex out of range");
  }
  if (!is_two_linked(adj, gamma)) throw std::invalid_argument("vertex set is not 2-linked");
  Polymer p;
  p.neighborhood_size = neighborhood_size(g, gamma);
  p.vertices = std::move(gamma);
  return p;
}

void for_each_polymer_containing(const TwoLinkedAdjacency& adj, int root, int k_max,
                                 const std::function<void(std::span<const int>)>& visit) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (root < 0 || root >= adj.n_right()) throw std::invalid_argument("root out of range");
  detail::for_each_connected_subset(
      root, [&adj](int u) { return adj.neighbors(u); },
      [k_max](int, const std::vector<int>& members) {
        return static_cast<int>(members.size()) < k_max;
      },
      [&visit](const std::vector<int>& members) { visit(members); },
      std::vector<char>(adj.n_right(), 0));
}

std::vector<Polymer> enumerate_polymers(const BipartiteGraph& g, int root, int k_max) {
  const TwoLinkedAdjacency adj(g);
  std::vector<Polymer> out;
  for_each_polymer_containing(adj, root, k_max, [&](std::span<const int> members) {
    Polymer p;
    p.vertices.assign(members.begin(), members.end());
    std::sort(p.vertices.begin(), p.vertices.end());
    p.neighborhood_size = neighborhood_size(g, p.vertices);
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<Polymer> enumerate_all_polymers(const BipartiteGraph& g, int max_size,
                                            const std::vector<char>& allowed) {
  if (max_size < 1) return {};
  if (!allowed.empty() && static_cast<int>(allowed.size()) != g.n_right()) {
    throw std::invalid_argument("allowed mask must have one entry per right vertex");
  }
  const TwoLinkedAdjacency adj(g);
  std::vector<Polymer> out;
  std::vector<char> blocked(g.n_right(), 0);
  for (int r = 0; r < g.n_right(); ++r) blocked[r] = !allowed.empty() && !allowed[r];

  // Each set is produced from its least vertex: everything below the root is blocked.
  for (int root = 0; root < g.n_right(); ++root) {
    if (!blocked[root]) {
      detail::for_each_connected_subset(
          root, [&adj](int u) { return adj.neighbors(u); },
          [max_size](int, const std::vector<int>& members) {
            return static_cast<int>(members.size()) < max_size;
          },
          [&](const std::vector<int>& members) {
            Polymer p;
            p.vertices = members;
            std::sort(p.vertices.begin(), p.vertices.end());
            p.neighborhood_size = neighborhood_size(g, p.vertices);
            out.push_back(std::move(p));
          },
          blocked);
    }
    blocked[root] = 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool incompatible(const Polymer& g1, const Polymer& g2, const TwoLinkedAdjacency& adj) {
  for (int a : g1.vertices) {
    if (g2.contains(a)) return true;
    for (int nb : adj.neighbors(a)) {
      if (g2.contains(nb)) return true;
    }
  }
  return false;
}

double polymer_count_bound(int Delta_L, int Delta_R, int k) {
  if (k < 1) return 0.0;
  const double base = std::numbers::e * Delta_R * std::max(Delta_L - 1, 0);
  return std::pow(base, k - 1) / std::pow(static_cast<double>(k), 1.5);
}

double weight_decay_ratio(double abs_lambda_R, double abs_one_plus_lambda_L, int delta_R,
                          int Delta_L) {
  if (Delta_L <= 0) return abs_lambda_R;
  const double exponent = static_cast<double>(delta_R) / Delta_L;
  return abs_lambda_R / std::exp(exponent * std::log(abs_one_plus_lambda_L));
}

double kp_vertex_bound(int Delta_L, int Delta_R) {
  return 1.0 / (2.0 * (Delta_R * std::max(Delta_L - 1, 0) + 1.0));
}

namespace {

// sum_{k > k_max} count_bound(k) * q^k * e^{(1/2 + eta) k}. Consecutive terms
// shrink by at least r = e*Delta_R*(Delta_L-1) * q * e^{1/2+eta}; explicit terms
// are summed until negligible and the remainder is closed geometrically.
double analytic_tail(int Delta_L, int Delta_R, double q, double eta, int k_max) {
  const double growth = std::exp(0.5 + eta);
  const double r = std::numbers::e * Delta_R * std::max(Delta_L - 1, 0) * q * growth;
  if (r == 0.0) return 0.0;
  if (r >= 1.0) return std::numeric_limits<double>::infinity();

  const auto term = [&](int k) {
    return std::exp(std::log(polymer_count_bound(Delta_L, Delta_R, k)) +
                    k * (std::log(q) + 0.5 + eta));
  };
  double sum = 0.0;
  double last = 0.0;
  constexpr int kExplicitTerms = 4096;
  for (int k = k_max + 1; k <= k_max + kExplicitTerms; ++k) {
    last = term(k);
    sum += last;
    if (last <= 1e-18 * sum) break;
  }
  return sum + last * r / (1.0 - r);
}

}  // namespace

KPVertexSum kp_vertex_sum(const BipartiteGraph& g, int v, double abs_lambda_R,
                          double abs_one_plus_lambda_L, double eta, int k_max,
                          const DegreeProfile& cls) {
  if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (v < 0 || v >= g.n_right()) throw std::invalid_argument("vertex out of range");

  KPVertexSum out;
  out.bound = kp_vertex_bound(cls.delta_L_max, cls.delta_R_max);
  if (abs_lambda_R == 0.0) {
    out.status = KPStatus::Satisfied;
    return out;
  }

  const TwoLinkedAdjacency adj(g);
  double partial = 0.0;
  const double log_lr = std::log(abs_lambda_R);
  const double log_lp = std::log(abs_one_plus_lambda_L);
  for_each_polymer_containing(adj, v, k_max, [&](std::span<const int> members) {
    const int k = static_cast<int>(members.size());
    const int n = neighborhood_size(g, members);
    partial += std::exp(k * (log_lr + 0.5 + eta) - n * log_lp);
  });
  out.partial = partial;

  // No polymer through v is larger than its 2-linked component.
  std::vector<char> seen(static_cast<std::size_t>(g.n_right()), 0);
  std::vector<int> queue{v};
  seen[static_cast<std::size_t>(v)] = 1;
  for (std::size_t i = 0; i < queue.size() && static_cast<int>(queue.size()) <= k_max; ++i) {
    for (int w : adj.neighbors(queue[i])) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  if (static_cast<int>(queue.size()) <= k_max) {
    out.tail = 0.0;
  } else {
    const double q =
        weight_decay_ratio(abs_lambda_R, abs_one_plus_lambda_L, cls.delta_R_min, cls.delta_L_max);
    out.tail = analytic_tail(cls.delta_L_max, cls.delta_R_max, q, eta, k_max);
  }

  if (out.partial > out.bound) {
    out.status = KPStatus::Violated;
  } else if (!std::isfinite(out.tail)) {
    out.status = KPStatus::Inconclusive;
  } else if (out.partial + out.tail <= out.bound * (1.0 + 1e-12)) {
    out.status = KPStatus::Satisfied;
  } else {
    out.status = KPStatus::Inconclusive;
  }
  return out;
}

}  // namespace bihc
