#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "bihc/graph.hpp"
#include "bihc/polymer.hpp"
#include "bihc/ursell.hpp"

namespace bihc {

/// All polymers up to a size cap (optionally restricted to an allowed subset
/// of R), with the incompatibility relation between distinct polymers.
struct PolymerSystem {
  int n_right = 0;        // |R| of the restricted model
  std::vector<Polymer> polymers;  // canonical order
  std::vector<std::vector<int>> incompatible;  // distinct partners, ascending

  static PolymerSystem build(const BipartiteGraph& g, int max_size,
                             const std::vector<char>& allowed = {});

  template <class Scalar>
  std::vector<Scalar> weights(const Fugacities<Scalar>& lam) const {
    std::vector<Scalar> w;
    w.reserve(polymers.size());
    for (const auto& p : polymers) w.push_back(p.weight(lam));
    return w;
  }
};

/// A multiset of polymers (indices into a PolymerSystem) whose incompatibility
/// graph on slots is connected.
struct Cluster {
  std::vector<int> polymers;        // distinct, ascending
  std::vector<int> multiplicities;  // same length, each >= 1
  int total_size = 0;
  int slots = 0;
  std::int64_t signed_sum = 0;  // sum over spanning connected edge sets of H, signed

  /// slots! / prod m_i!: the number of orderings of this multiset.
  std::int64_t ordering_multiplier() const;
  Rational ursell() const;
  /// ordering_multiplier * ursell = signed_sum / prod m_i!.
  double coefficient() const;

  /// coefficient * prod w_i^{m_i}.
  template <class Scalar>
  Scalar weight(const std::vector<Scalar>& polymer_weights) const {
    Scalar prod(coefficient());
    for (std::size_t i = 0; i < polymers.size(); ++i) {
      prod *= ipow(polymer_weights[static_cast<std::size_t>(polymers[i])], multiplicities[i]);
    }
    return prod;
  }
};

struct ClusterLimits {
  std::size_t max_clusters = 5'000'000;
  int max_slots = kMaxClusterSlots;
  int threads = 0;  // 0: hardware concurrency
};

/// Number of clusters of total size < m. Cheap relative to enumeration (the
/// multiplicities are counted, not listed). Throws ResourceCapExceeded when a
/// limit is crossed.
std::size_t count_clusters(const PolymerSystem& sys, int m, const ClusterLimits& limits = {});

/// Visits every cluster of total size < m exactly once, grouped by least
/// polymer and in a deterministic order.
void for_each_cluster(const PolymerSystem& sys, int m, const std::function<void(const Cluster&)>& visit,
                      const ClusterLimits& limits = {});

std::vector<Cluster> enumerate_clusters(const BipartiteGraph& g, int m,
                                        const ClusterLimits& limits = {});

/// sum over clusters of size < m of cluster.weight(w) * factor(cluster), with
/// per-anchor compensated sums reduced in anchor order (thread-count
/// independent). `factor` may be empty (treated as 1).
template <class Scalar>
Scalar cluster_sum(const PolymerSystem& sys, const std::vector<Scalar>& polymer_weights, int m,
                   const std::function<double(const Cluster&)>& factor,
                   const ClusterLimits& limits = {});

template <class Scalar>
struct ExpansionEstimate {
  Scalar value{};
  int m = 1;
  double eta = 0.0;
  /// n_R e^{-m eta} when a convergence certificate was supplied; unbounded otherwise.
  std::optional<double> error_bound;

  bool bounded() const { return error_bound.has_value(); }
};

struct ExpansionOptions {
  ClusterLimits limits;
  std::optional<double> certified_eta;
  std::vector<char> allowed;  // restrict R; empty means all of R
};

/// T_m, the cluster expansion of log Xi truncated to clusters of size < m.
template <class Scalar>
ExpansionEstimate<Scalar> truncated_expansion(const BipartiteGraph& g,
                                              const Fugacities<Scalar>& lam, int m,
                                              const ExpansionOptions& options = {});

/// One line per cluster: multiplicities, polymer sizes, ursell value, weight.
void write_cluster_dump(std::ostream& out, const PolymerSystem& sys,
                        const std::vector<double>& polymer_weights, int m,
                        const ClusterLimits& limits = {});

}  // namespace bihc
