#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "bihc/cluster.hpp"
#include "bihc/conditions.hpp"
#include "bihc/graph.hpp"
#include "bihc/polymer.hpp"

namespace bihc {

enum class MarginalBackend {
  Exact,      // Xi of restricted models by an exact recursion; no certificate needed
  Truncated,  // exp(T_m) of restricted models; needs a certificate
};

inline constexpr int kMaxExactSamplerRight = 24;

struct SamplerOptions {
  MarginalBackend backend = MarginalBackend::Truncated;
  double eta = 0.1;
  int k_max = 6;
  int max_m = 10;  // cap on the truncation order used per step
  ClusterLimits limits;
};

struct PolymerConfig {
  std::vector<Polymer> chosen;  // in the order they were drawn
  std::vector<int> decided;     // right vertices in processing order
};

struct SamplerStats {
  int m = 0;                 // truncation order (truncated backend)
  int m_required = 0;        // order the per-step budget asks for
  bool degraded = false;     // m < m_required
  double step_budget = 0.0;  // epsilon / (2 n_R)
  KPCertificate certificate;
};

/// Seeded per (seed, stream) so independent draws can be reproduced one by one.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Polymer-level self-reduction: right vertices in ascending order, at each
/// one either no polymer or a polymer through it, with probabilities
/// proportional to Xi of the remaining allowed vertex set. Restricted-model
/// values are memoized across draws.
class PolymerSampler {
 public:
  PolymerSampler(const BipartiteGraph& g, const RealFugacities& lam, double epsilon,
                 const SamplerOptions& options = {});

  PolymerConfig sample_config(std::mt19937_64& rng);
  VertexSet sample_independent_set(std::mt19937_64& rng);

  const SamplerStats& stats() const { return stats_; }

  /// log Xi of the model restricted to the right-vertex mask `allowed`
  /// (exact or truncated per the backend).
  double log_xi(std::uint64_t allowed);

 private:
  struct Candidate {
    std::uint64_t own = 0;
    std::uint64_t blocked = 0;  // own vertices and their 2-linked neighbors
    double log_weight = 0.0;
    int index = 0;  // into polymers_
  };

  double exact_log_xi(std::uint64_t allowed);
  double truncated_log_xi(std::uint64_t allowed);

  BipartiteGraph g_;
  RealFugacities lam_;
  SamplerOptions options_;
  SamplerStats stats_;
  std::vector<Polymer> polymers_;
  std::vector<std::vector<Candidate>> candidates_;  // per right vertex, others all greater
  std::unordered_map<std::uint64_t, double> memo_;
};

/// Adds every unblocked left vertex independently with probability lambda_L / (1 + lambda_L).
VertexSet extend_to_independent_set(const BipartiteGraph& g, const PolymerConfig& config,
                                    const RealFugacities& lam, std::mt19937_64& rng);
VertexSet extend_to_independent_set(const BipartiteGraph& g, const PolymerConfig& config,
                                    const RealFugacities& lam, std::uint64_t seed);

PolymerConfig sample_polymer_config(const BipartiteGraph& g, const RealFugacities& lam,
                                    double epsilon, std::uint64_t seed,
                                    const SamplerOptions& options = {});

VertexSet sample_independent_set(const BipartiteGraph& g, const RealFugacities& lam,
                                 double epsilon, std::uint64_t seed,
                                 const SamplerOptions& options = {});

/// `count` draws; draw i uses make_rng(seed, i).
std::vector<VertexSet> sample_independent_sets(const BipartiteGraph& g, const RealFugacities& lam,
                                               double epsilon, std::uint64_t seed,
                                               std::size_t count,
                                               const SamplerOptions& options = {});

}  // namespace bihc
