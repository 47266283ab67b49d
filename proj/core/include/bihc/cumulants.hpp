#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bihc/cluster.hpp"
#include "bihc/graph.hpp"
#include "bihc/polymer.hpp"

namespace bihc {

inline constexpr int kMaxPartitionSet = 8;

/// Values indexed by sorted vertex subsets.
using SubsetValues = std::map<VertexSet, double>;

/// Visits every set partition of {0..n-1} as a restricted-growth string:
/// block_of[i] is the block of element i, blocks are numbered in order of
/// first appearance. n <= 8.
void for_each_set_partition(int n,
                            const std::function<void(const std::vector<int>& block_of, int blocks)>& visit);

std::uint64_t bell_number(int n);

/// mu_A = sum over partitions pi of A of prod_{S in pi} kappa(S).
/// Throws std::invalid_argument when a needed subset is missing.
double moments_from_cumulants(const SubsetValues& kappa, const VertexSet& a);

/// kappa(A) = sum_pi (-1)^{|pi|-1} (|pi|-1)! prod_{S in pi} mu_S.
double cumulants_from_moments(const SubsetValues& mu, const VertexSet& a);

/// C(eta, a) = sum over y in {1,2,...}^a of prod y_v e^{-eta sum (y_v - 1)},
/// summed until terms fall below 1e-15 relative, with the geometric remainder added.
double cumulant_decay_constant(double eta, int a);

/// Bound on sum of |w(Gamma)| prod Y_v over clusters with |Gamma| >= m, using
/// |Gamma| >= max(m, mst / 2 + sum (y_v - 1)).
double cumulant_tail_bound(double eta, int a, int mst, int m);

/// sum_k S(s, k) (k - 1)!: bounds |kappa(S)| for |S| = s indicator variables.
double indicator_cumulant_bound(int s);

/// C' with |mu_{A u B} - mu_A mu_B| <= C' e^{-eta D(A,B)/2} for disjoint A, B
/// inside R, |A| + |B| <= 8: the sum over partitions with a block meeting both
/// sides, crossing blocks bounded by C(eta, |S|), the rest by the indicator bound.
double correlation_decay_constant(double eta, int a, int b);

struct CumulantOptions {
  double eta = 0.1;  // requested for empirical certification
  int k_max = 6;
  ClusterLimits limits;
};

struct CumulantQuery {
  std::vector<int> a;  // right indices, sorted
  int m = 1;
  double value = 0.0;
  double eta = 0.0;
  double tail_bound = 0.0;  // +inf without a certificate
};

/// sum over clusters of size < m of w(Gamma) prod_{v in A} Y_v(Gamma).
/// Throws std::invalid_argument when A is empty or not inside R.
CumulantQuery truncated_cumulant(const BipartiteGraph& g, const RealFugacities& lam,
                                 const VertexSet& a, int m, const CumulantOptions& options = {});

/// B empty: a cumulant query on A (inside R). Otherwise a correlation query
/// |mu_{A u B} - mu_A mu_B| from the exact oracle.
struct DecayQuery {
  VertexSet a;
  VertexSet b;
};

struct DecayRow {
  int query_id = 0;
  std::string kind;       // "cumulant", "pair" or "sets"
  int distance_or_mst = 0;  // kInfinity across components
  double value = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};

/// Rows for each query; correlation queries are skipped when the oracle cannot
/// handle the graph, and queries with overlapping A and B are skipped.
/// Throws CertificationError without a convergence certificate.
std::vector<DecayRow> decay_experiment(const BipartiteGraph& g, const RealFugacities& lam,
                                       const std::vector<DecayQuery>& queries, int m,
                                       const CumulantOptions& options = {});

void write_decay_csv(std::ostream& out, const std::vector<DecayRow>& rows);

}  // namespace bihc
