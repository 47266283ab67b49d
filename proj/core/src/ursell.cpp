#include "bihc/ursell.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace bihc {

namespace {
__extension__ typedef __int128 Int128;
}  // namespace

SmallGraph::SmallGraph(int n) : n_(n), rows_(n, 0u) {
  if (n < 0 || n > 32) throw std::invalid_argument("SmallGraph supports 0..32 vertices");
}

void SmallGraph::add_edge(int a, int b) {
  if (a == b) throw std::invalid_argument("SmallGraph has no loops");
  rows_[a] |= 1u << b;
  rows_[b] |= 1u << a;
}

std::vector<std::pair<int, int>> SmallGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (adjacent(a, b)) out.emplace_back(a, b);
  return out;
}

bool SmallGraph::connected() const {
  if (n_ == 0) return false;
  std::uint32_t seen = 1u;
  std::uint32_t frontier = 1u;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) next |= rows_[std::countr_zero(f)];
    frontier = next & ~seen;
    seen |= next;
  }
  return std::popcount(seen) == n_;
}

SmallGraph SmallGraph::complete(int n) {
  SmallGraph h(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) h.add_edge(a, b);
  return h;
}

SmallGraph SmallGraph::cycle(int n) {
  SmallGraph h(n);
  for (int a = 0; a < n; ++a) h.add_edge(a, (a + 1) % n);
  return h;
}

std::int64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("factorial argument out of range");
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::int64_t signed_connected_sum_edge_subsets(const SmallGraph& h) {
  const auto edges = h.edges();
  if (edges.size() > 30) throw std::invalid_argument("too many edges for subset enumeration");
  const int n = h.n();
  if (n == 0) return 0;
  const std::uint64_t subsets = std::uint64_t{1} << edges.size();
  std::int64_t total = 0;
  std::vector<std::uint32_t> rows(n);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::fill(rows.begin(), rows.end(), 0u);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if ((mask >> e) & 1u) {
        rows[edges[e].first] |= 1u << edges[e].second;
        rows[edges[e].second] |= 1u << edges[e].first;
      }
    }
    std::uint32_t seen = 1u;
    std::uint32_t frontier = 1u;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1) next |= rows[std::countr_zero(f)];
      frontier = next & ~seen;
      seen |= next;
    }
    if (std::popcount(seen) == n) total += (std::popcount(mask) % 2 == 0) ? 1 : -1;
  }
  return total;
}

namespace {

// Multigraph as a dense symmetric matrix of edge multiplicities.
using Multigraph = std::vector<std::vector<int>>;

bool multigraph_connected(const Multigraph& g) {
  const std::size_t n = g.size();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t a = stack.back();
    stack.pop_back();
    for (std::size_t b = 0; b < n; ++b) {
      if (g[a][b] > 0 && !seen[b]) {
        seen[b] = 1;
        ++count;
        stack.push_back(b);
      }
    }
  }
  return count == n;
}

// C(G) = C(G - bundle) - C(G / bundle): including any nonempty part of a
// bundle of k parallel edges contributes sum_{j>=1} C(k, j)(-1)^j = -1.
std::int64_t deletion_contraction(const Multigraph& g, std::map<Multigraph, std::int64_t>& memo) {
  const std::size_t n = g.size();
  if (n == 1) return 1;
  if (!multigraph_connected(g)) return 0;
  if (auto it = memo.find(g); it != memo.end()) return it->second;

  // Bundle between the last vertex and its lowest neighbor.
  const std::size_t v = n - 1;
  std::size_t u = 0;
  while (g[v][u] == 0) ++u;

  Multigraph deleted = g;
  deleted[u][v] = deleted[v][u] = 0;

  Multigraph contracted(n - 1, std::vector<int>(n - 1, 0));
  for (std::size_t a = 0; a < n - 1; ++a)
    for (std::size_t b = 0; b < n - 1; ++b) contracted[a][b] = g[a][b];
  for (std::size_t w = 0; w < n - 1; ++w) {
    if (w == u) continue;
    contracted[u][w] += g[v][w];
    contracted[w][u] += g[v][w];
  }

  const std::int64_t result = deletion_contraction(deleted, memo) -
                              deletion_contraction(contracted, memo);
  memo.emplace(g, result);
  return result;
}

}  // namespace

std::int64_t signed_connected_sum_deletion_contraction(const SmallGraph& h) {
  const int n = h.n();
  if (n == 0) return 0;
  Multigraph g(n, std::vector<int>(n, 0));
  for (auto [a, b] : h.edges()) g[a][b] = g[b][a] = 1;
  std::map<Multigraph, std::int64_t> memo;
  return deletion_contraction(g, memo);
}

Rational ursell_edge_subsets(const SmallGraph& h) {
  return Rational(signed_connected_sum_edge_subsets(h), factorial(h.n()));
}

Rational ursell_deletion_contraction(const SmallGraph& h) {
  return Rational(signed_connected_sum_deletion_contraction(h), factorial(h.n()));
}

Rational ursell(const SmallGraph& h) {
  if (h.n() < 1 || h.n() > kMaxUrsellVertices) {
    throw std::invalid_argument("ursell supports 1..12 vertices");
  }
  if (!h.connected()) throw std::invalid_argument("ursell of a disconnected graph");
  return h.n() <= 6 ? ursell_edge_subsets(h) : ursell_deletion_contraction(h);
}

// c(a) = f(a) - sum over proper sub-multisets T holding a fixed anchor slot
// of f(a - T) c(T), where f is 1 on edgeless multisets. The complement a - T
// must be a 0/1 vector on an independent set I; choosing T then leaves a
// binomial factor prod_{i in I} (a_i - [i == anchor]).
SignedSumTable::SignedSumTable(std::span<const std::uint32_t> adjacency,
                               std::span<const int> max_mult, std::span<const int> sizes,
                               int budget) {
  const int s = static_cast<int>(max_mult.size());
  if (s == 0 || s > 32 || static_cast<int>(adjacency.size()) != s ||
      static_cast<int>(sizes.size()) != s) {
    throw std::invalid_argument("SignedSumTable: bad support");
  }
  stride_.assign(s + 1, 1);
  for (int i = 0; i < s; ++i) {
    if (max_mult[i] < 0) throw std::invalid_argument("SignedSumTable: negative multiplicity");
    stride_[i + 1] = stride_[i] * (max_mult[i] + 1);
    if (stride_[i + 1] > (std::int64_t{1} << 28)) {
      throw std::invalid_argument("SignedSumTable: too many states");
    }
  }
  const std::int64_t states = stride_[s];
  values_.assign(static_cast<std::size_t>(states), 0);
  std::vector<int> a(s, 0);
  std::vector<int> chosen;

  for (std::int64_t idx = 1; idx < states; ++idx) {
    int size = 0;
    int slots = 0;
    std::uint32_t support = 0;
    bool all_single = true;
    for (int i = 0; i < s; ++i) {
      a[i] = static_cast<int>((idx / stride_[i]) % (max_mult[i] + 1));
      size += a[i] * sizes[i];
      slots += a[i];
      if (a[i] > 0) support |= 1u << i;
      if (a[i] > 1) all_single = false;
    }
    if (size > budget) continue;
    if (slots > kMaxClusterSlots) throw std::invalid_argument("SignedSumTable: too many slots");
    const int anchor = std::countr_zero(support);

    bool independent = all_single;
    for (std::uint32_t f = support; f && independent; f &= f - 1) {
      if (adjacency[std::countr_zero(f)] & support) independent = false;
    }

    Int128 acc = independent ? 1 : 0;
    const auto peel = [&](auto&& self, std::uint32_t remaining, std::uint32_t banned) -> void {
      if (!chosen.empty()) {
        std::int64_t sub = idx;
        Int128 factor = 1;
        bool keeps_anchor = true;
        for (int i : chosen) {
          sub -= stride_[i];
          if (i == anchor) {
            if (a[i] == 1) keeps_anchor = false;
            factor *= a[i] - 1;
          } else {
            factor *= a[i];
          }
        }
        if (keeps_anchor) acc -= factor * values_[static_cast<std::size_t>(sub)];
      }
      for (std::uint32_t f = remaining; f; f &= f - 1) {
        const int i = std::countr_zero(f);
        const std::uint32_t bit = 1u << i;
        if (banned & bit) continue;
        chosen.push_back(i);
        self(self, remaining & ~((bit << 1) - 1), banned | adjacency[i]);
        chosen.pop_back();
      }
    };
    peel(peel, support, 0u);

    if (acc > INT64_MAX || acc < INT64_MIN) throw std::overflow_error("signed sum overflow");
    values_[static_cast<std::size_t>(idx)] = static_cast<std::int64_t>(acc);
  }
}

std::int64_t SignedSumTable::at(std::span<const int> multiplicities) const {
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < multiplicities.size(); ++i) idx += multiplicities[i] * stride_[i];
  return values_[static_cast<std::size_t>(idx)];
}

std::int64_t cluster_signed_sum(std::span<const std::uint32_t> adjacency,
                                std::span<const int> multiplicities) {
  int slots = 0;
  for (int m : multiplicities) {
    if (m < 1) throw std::invalid_argument("cluster_signed_sum: multiplicity must be >= 1");
    slots += m;
  }
  if (slots > kMaxClusterSlots) throw std::invalid_argument("cluster_signed_sum: too many slots");
  const std::vector<int> ones(multiplicities.size(), 1);
  const SignedSumTable table(adjacency, multiplicities, ones, slots);
  return table.at(multiplicities);
}

}  // namespace bihc
