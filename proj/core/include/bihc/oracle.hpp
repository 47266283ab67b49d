#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "bihc/graph.hpp"
#include "bihc/polymer.hpp"

namespace bihc {

inline constexpr int kMaxExactVertices = 30;
inline constexpr int kMaxComplexVertices = 24;
inline constexpr int kMaxTableVertices = 14;
inline constexpr int kMaxExactXiRight = 24;

/// Real-mode value as sign and log-magnitude.
struct SignedLog {
  int sign = 1;
  double log_abs = 0.0;

  double value() const { return sign * std::exp(log_abs); }
};

/// Memoized independent-set partition function of induced subgraphs, keyed
/// by the flat-id mask of the remaining vertex set. Components are factored
/// out before branching.
class HardCoreOracle {
 public:
  HardCoreOracle(const BipartiteGraph& g, const RealFugacities& lam);

  const BipartiteGraph& graph() const { return g_; }

  /// log Z(G[S]) for the flat-id mask S.
  double log_Z(std::uint64_t mask);
  double log_Z() { return log_Z(full_mask()); }

  /// Pr[A subset of I]; 0 when A is not independent.
  double marginal(const VertexSet& a);

  std::uint64_t full_mask() const;
  std::uint64_t closed_neighborhood(int flat) const { return closed_[static_cast<std::size_t>(flat)]; }

 private:
  double branch(std::uint64_t mask);

  BipartiteGraph g_;
  RealFugacities lam_;
  std::vector<std::uint64_t> adj_;     // open neighborhoods
  std::vector<std::uint64_t> closed_;  // closed neighborhoods
  std::vector<double> log_weight_;     // -inf for zero fugacity
  std::unordered_map<std::uint64_t, double> memo_;
};

/// Z(G) as sign and log-magnitude. Throws SizeCapExceeded above 30 vertices.
SignedLog exact_Z(const BipartiteGraph& g, const RealFugacities& lam);
double exact_log_Z(const BipartiteGraph& g, const RealFugacities& lam);

/// Complex Z(G). Throws SizeCapExceeded above 24 vertices.
std::complex<double> exact_Z(const BipartiteGraph& g, const ComplexFugacities& lam);

/// Xi by direct summation over pairwise-compatible polymer collections.
double exact_Xi(const BipartiteGraph& g, const RealFugacities& lam);
double exact_log_Xi(const BipartiteGraph& g, const RealFugacities& lam);

double exact_marginal(const BipartiteGraph& g, const RealFugacities& lam, const VertexSet& a);

/// Every independent set (sorted vertex list) with its probability.
std::map<VertexSet, double> exact_distribution(const BipartiteGraph& g, const RealFugacities& lam);

/// A polymer configuration as the sorted list of its polymers' sorted vertex lists.
using PolymerConfigKey = std::vector<std::vector<int>>;

std::map<PolymerConfigKey, double> exact_nu(const BipartiteGraph& g, const RealFugacities& lam);

/// Joint cumulant of the occupation indicators of A (|A| <= 8), from exact moments.
double exact_cumulant(const BipartiteGraph& g, const RealFugacities& lam, const VertexSet& a);
double exact_cumulant(HardCoreOracle& oracle, const VertexSet& a);

}  // namespace bihc
