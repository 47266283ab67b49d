#include "bihc/cumulants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "bihc/conditions.hpp"
#include "bihc/errors.hpp"
#include "bihc/oracle.hpp"

namespace bihc {

void for_each_set_partition(int n,
                            const std::function<void(const std::vector<int>&, int)>& visit) {
  if (n < 1 || n > kMaxPartitionSet) throw std::invalid_argument("partition set size must be 1..8");
  std::vector<int> block_of(static_cast<std::size_t>(n), 0);
  const auto grow = [&](auto&& self, int i, int blocks) -> void {
    if (i == n) {
      visit(block_of, blocks);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      block_of[static_cast<std::size_t>(i)] = b;
      self(self, i + 1, std::max(blocks, b + 1));
    }
  };
  grow(grow, 1, 1);
}

std::uint64_t bell_number(int n) {
  std::uint64_t count = 0;
  for_each_set_partition(n, [&count](const std::vector<int>&, int) { ++count; });
  return count;
}

namespace {

VertexSet normalized(const VertexSet& a) {
  VertexSet s = a;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw std::invalid_argument("set has repeated vertices");
  }
  if (s.empty() || s.size() > static_cast<std::size_t>(kMaxPartitionSet)) {
    throw std::invalid_argument("set size must be 1..8");
  }
  return s;
}

// sum over partitions of coefficient(|pi|) * prod_S values(S).
double partition_sum(const SubsetValues& values, const VertexSet& a,
                     const std::function<double(int)>& coefficient) {
  const VertexSet s = normalized(a);
  const int n = static_cast<int>(s.size());
  std::vector<double> by_mask(std::size_t{1} << n, 0.0);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    VertexSet subset;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) subset.push_back(s[static_cast<std::size_t>(i)]);
    const auto it = values.find(subset);
    if (it == values.end()) throw std::invalid_argument("missing value for a subset");
    by_mask[mask] = it->second;
  }
  double total = 0.0;
  std::vector<std::uint32_t> masks;
  for_each_set_partition(n, [&](const std::vector<int>& block_of, int blocks) {
    masks.assign(static_cast<std::size_t>(blocks), 0u);
    for (int i = 0; i < n; ++i) masks[static_cast<std::size_t>(block_of[static_cast<std::size_t>(i)])] |= 1u << i;
    double prod = coefficient(blocks);
    for (std::uint32_t m : masks) prod *= by_mask[m];
    total += prod;
  });
  return total;
}

// sum_{t >= 0} C(t + 2a - 1, 2a - 1) f(t), for f eventually e^{-eta t} times a
// constant. Terms are summed past the peak until negligible, then the
// remainder is closed with the ratio bound (t + 2a)/(t + 1) e^{-eta}.
double binomial_series(double eta, int a, const std::function<double(int)>& f) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (a < 1) throw std::invalid_argument("set size must be >= 1");
  const double r = 2.0 * a - 1.0;
  double binom = 1.0;
  double sum = 0.0;
  for (int t = 0; t < 10'000'000; ++t) {
    const double term = binom * f(t);
    sum += term;
    const double ratio = (t + 1.0 + r) / (t + 1.0) * std::exp(-eta);
    if (ratio < 1.0 && term <= 1e-15 * sum) return sum + term * ratio / (1.0 - ratio);
    binom *= (t + 1.0 + r) / (t + 1.0);
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

double moments_from_cumulants(const SubsetValues& kappa, const VertexSet& a) {
  return partition_sum(kappa, a, [](int) { return 1.0; });
}

double cumulants_from_moments(const SubsetValues& mu, const VertexSet& a) {
  return partition_sum(mu, a, [](int blocks) {
    double f = 1.0;
    for (int k = 2; k < blocks; ++k) f *= k;
    return (blocks % 2 == 1) ? f : -f;
  });
}

double cumulant_decay_constant(double eta, int a) {
  return binomial_series(eta, a, [eta](int t) { return std::exp(-eta * t); });
}

double cumulant_tail_bound(double eta, int a, int mst, int m) {
  if (mst == kInfinity) return 0.0;
  const double half = mst / 2.0;
  return binomial_series(eta, a, [=](int t) { return std::exp(-eta * std::max<double>(m, half + t)); });
}

double indicator_cumulant_bound(int s) {
  double total = 0.0;
  for_each_set_partition(s, [&total](const std::vector<int>&, int blocks) {
    double f = 1.0;
    for (int k = 2; k < blocks; ++k) f *= k;
    total += f;
  });
  return total;
}

double correlation_decay_constant(double eta, int a, int b) {
  if (a < 1 || b < 1 || a + b > kMaxPartitionSet) {
    throw std::invalid_argument("need |A|, |B| >= 1 and |A| + |B| <= 8");
  }
  const int n = a + b;
  std::vector<double> crossing(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> plain(static_cast<std::size_t>(n) + 1, 0.0);
  for (int s = 1; s <= n; ++s) {
    crossing[static_cast<std::size_t>(s)] = cumulant_decay_constant(eta, s);
    plain[static_cast<std::size_t>(s)] = indicator_cumulant_bound(s);
  }
  const std::uint32_t a_mask = (1u << a) - 1;
  double total = 0.0;
  std::vector<std::uint32_t> masks;
  for_each_set_partition(n, [&](const std::vector<int>& block_of, int blocks) {
    masks.assign(static_cast<std::size_t>(blocks), 0u);
    for (int i = 0; i < n; ++i) masks[static_cast<std::size_t>(block_of[static_cast<std::size_t>(i)])] |= 1u << i;
    bool any_crossing = false;
    double prod = 1.0;
    for (std::uint32_t mask : masks) {
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      if ((mask & a_mask) && (mask & ~a_mask)) {
        any_crossing = true;
        prod *= crossing[size];
      } else {
        prod *= plain[size];
      }
    }
    if (any_crossing) total += prod;
  });
  return total;
}

CumulantQuery truncated_cumulant(const BipartiteGraph& g, const RealFugacities& lam,
                                 const VertexSet& a, int m, const CumulantOptions& options) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  validate(lam);
  const VertexSet s = normalized(a);
  CumulantQuery q;
  q.m = m;
  for (const Vertex& x : s) {
    if (x.side != Side::Right || !g.contains(x)) {
      throw std::invalid_argument("cumulant sets must lie in R");
    }
    q.a.push_back(x.index);
  }

  const KPCertificate cert = certify_kp(g, lam, options.eta, options.k_max);
  q.eta = cert.eta;
  const int mst = steiner_tree_size(g, s);
  q.tail_bound = cert.valid() ? cumulant_tail_bound(cert.eta, static_cast<int>(s.size()), mst, m)
                              : std::numeric_limits<double>::infinity();
  if (m == 1 || lam.lambda_R == 0.0 || mst == kInfinity) return q;

  const PolymerSystem sys = PolymerSystem::build(g, m - 1);
  // Y_v per polymer, for the vertices of A.
  std::vector<std::vector<int>> hits(sys.polymers.size(), std::vector<int>(q.a.size(), 0));
  for (std::size_t p = 0; p < sys.polymers.size(); ++p)
    for (std::size_t j = 0; j < q.a.size(); ++j) hits[p][j] = sys.polymers[p].contains(q.a[j]);

  const auto factor = [&](const Cluster& c) {
    double prod = 1.0;
    for (std::size_t j = 0; j < q.a.size(); ++j) {
      int y = 0;
      for (std::size_t i = 0; i < c.polymers.size(); ++i) {
        y += hits[static_cast<std::size_t>(c.polymers[i])][j] * c.multiplicities[i];
      }
      if (y == 0) return 0.0;
      prod *= y;
    }
    return prod;
  };
  q.value = cluster_sum(sys, sys.weights(lam), m, factor, options.limits);
  return q;
}

namespace {

VertexSet left_neighborhood_in_R(const BipartiteGraph& g, const VertexSet& s) {
  VertexSet out;
  for (const Vertex& x : s)
    if (x.side == Side::Left)
      for (int r : g.neighbors(x)) out.push_back(right(r));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t count_side(const VertexSet& s, Side side) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [side](const Vertex& x) { return x.side == side; }));
}

}  // namespace

std::vector<DecayRow> decay_experiment(const BipartiteGraph& g, const RealFugacities& lam,
                                       const std::vector<DecayQuery>& queries, int m,
                                       const CumulantOptions& options) {
  const KPCertificate cert = certify_kp(g, lam, options.eta, options.k_max);
  if (!cert.valid()) {
    throw CertificationError("no convergence certificate; decay rates are not predicted");
  }
  const double eta = cert.eta;
  std::unique_ptr<HardCoreOracle> oracle;
  if (g.n_vertices() <= kMaxExactVertices) oracle = std::make_unique<HardCoreOracle>(g, lam);

  std::vector<DecayRow> rows;
  for (std::size_t id = 0; id < queries.size(); ++id) {
    const DecayQuery& query = queries[id];
    DecayRow row;
    row.query_id = static_cast<int>(id);

    if (query.b.empty()) {
      const CumulantQuery cq = truncated_cumulant(g, lam, query.a, m, options);
      const int mst = steiner_tree_size(g, query.a);
      row.kind = "cumulant";
      row.distance_or_mst = mst;
      row.value = cq.value;
      row.bound = mst == kInfinity
                      ? 0.0
                      : cumulant_decay_constant(eta, static_cast<int>(query.a.size())) *
                            std::exp(-eta * mst / 2.0);
      row.satisfied = std::abs(row.value) <= row.bound;
      rows.push_back(row);
      continue;
    }

    if (!oracle) continue;
    VertexSet a = normalized(query.a);
    VertexSet b = normalized(query.b);
    VertexSet both = a;
    both.insert(both.end(), b.begin(), b.end());
    std::sort(both.begin(), both.end());
    if (std::adjacent_find(both.begin(), both.end()) != both.end()) continue;

    const int d = graph_distance(g, a, b);
    row.kind = (a.size() == 1 && b.size() == 1) ? "pair" : "sets";
    row.distance_or_mst = d;
    // Across components the two events are independent, so report 0 rather
    // than rounding noise; any finite distance bound applies.
    row.value = d == kInfinity ? 0.0
                               : oracle->marginal(both) - oracle->marginal(a) * oracle->marginal(b);
    const int effective = d == kInfinity ? g.n_vertices() : d;

    const VertexSet na = left_neighborhood_in_R(g, a);
    const VertexSet nb = left_neighborhood_in_R(g, b);
    const bool inside_R = count_side(a, Side::Left) == 0 && count_side(b, Side::Left) == 0;
    if (inside_R) {
      row.bound = correlation_decay_constant(eta, static_cast<int>(a.size()), static_cast<int>(b.size())) *
                  std::exp(-eta * effective / 2.0);
    } else if (effective <= 2) {
      row.bound = 1.0;
    } else {
      const int a_size = static_cast<int>(count_side(a, Side::Right) + na.size());
      const int b_size = static_cast<int>(count_side(b, Side::Right) + nb.size());
      row.bound = std::ldexp(1.0, static_cast<int>(na.size() + nb.size())) *
                  correlation_decay_constant(eta, std::max(a_size, 1), std::max(b_size, 1)) *
                  std::exp(-eta * (effective - 2) / 2.0);
    }
    row.satisfied = std::abs(row.value) <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

void write_decay_csv(std::ostream& out, const std::vector<DecayRow>& rows) {
  out << "query_id,kind,distance_or_mst,value,bound,satisfied\n";
  const auto old_precision = out.precision(17);
  for (const DecayRow& r : rows) {
    out << r.query_id << ',' << r.kind << ',';
    if (r.distance_or_mst == kInfinity) {
      out << "inf";
    } else {
      out << r.distance_or_mst;
    }
    out << ',' << r.value << ',' << r.bound << ',' << (r.satisfied ? "true" : "false") << '\n';
  }
  out.precision(old_precision);
}

}  // namespace bihc
