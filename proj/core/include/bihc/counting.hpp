#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bihc/cluster.hpp"
#include "bihc/conditions.hpp"
#include "bihc/graph.hpp"
#include "bihc/polymer.hpp"

namespace bihc {

/// max(1, ceil(log(n_R / epsilon) / eta)).
int choose_m(int n_R, double epsilon, double eta);

/// Largest m' <= m (at least 1) whose cluster enumeration fits `limits`.
int largest_feasible_m(const BipartiteGraph& g, int m, const ClusterLimits& limits,
                       const std::vector<char>& allowed = {});

struct CountOptions {
  double eta = kAnalyticEta;  // requested for empirical certification
  int k_max = 6;
  std::optional<int> m_override;
  ClusterLimits limits;
};

struct CountResult {
  double log_Z_estimate = 0.0;
  double expansion_value = 0.0;  // T_m, bit-identical to truncated_expansion
  double epsilon = 0.0;
  int m_used = 0;
  int m_required = 0;
  bool degraded = false;  // m_used < m_required because of resource limits
  double eta = 0.0;
  double error_bound = 0.0;  // n_R e^{-m_used eta}
  KPCertificate certificate;
  int n_L = 0;
  int n_R = 0;
  double wall_time_ms = 0.0;
};

/// log Z ~ n_L log(1 + lambda_L) + T_m. Throws CertificationError when no
/// certificate exists. When clusters at the required m exceed the limits, the
/// largest feasible m is used and the result is flagged as degraded.
CountResult approx_log_Z(const BipartiteGraph& g, const RealFugacities& lam, double epsilon,
                         const CountOptions& options = {});

struct ZeroProbeReport {
  int samples = 0;
  int boundary_samples = 0;
  double min_abs_Z = 0.0;
  double min_abs_Xi = 0.0;  // |Z| / |1 + lambda_L|^{n_L}
  ComplexFugacities argmin;
  int zeros_found = 0;
  InequalityCheck region_condition;
};

/// Exact |Z| at `samples` points of the region: half on the torus
/// |lambda_R| = Lambda_R, |1 + lambda_L| = 1 + Lambda_L, half inside it with
/// |lambda_R| < Lambda_R and 1 + Lambda_L < |1 + lambda_L| <= 2 (1 + Lambda_L).
/// Throws CertificationError when the region condition fails for the graph.
ZeroProbeReport zero_probe(const BipartiteGraph& g, const ComplexRegion& region, int samples,
                           std::uint64_t seed);

}  // namespace bihc
