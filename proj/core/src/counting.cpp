#include "bihc/counting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bihc/errors.hpp"
#include "bihc/oracle.hpp"
#include "bihc/sampler.hpp"

namespace bihc {

int choose_m(int n_R, double epsilon, double eta) {
  if (!(epsilon > 0.0) || !(eta > 0.0) || n_R < 1) {
    throw std::invalid_argument("choose_m needs epsilon > 0, eta > 0, n_R >= 1");
  }
  const double m = std::ceil(std::log(n_R / epsilon) / eta);
  return m < 1.0 ? 1 : static_cast<int>(m);
}

int largest_feasible_m(const BipartiteGraph& g, int m, const ClusterLimits& limits,
                       const std::vector<char>& allowed) {
  if (m <= 1) return 1;
  const PolymerSystem sys = PolymerSystem::build(g, m - 1, allowed);
  const auto feasible = [&](int candidate) {
    if (candidate <= 1) return true;
    try {
      count_clusters(sys, candidate, limits);
      return true;
    } catch (const ResourceCapExceeded&) {
      return false;
    }
  };
  if (feasible(m)) return m;
  int lo = 1;  // feasible
  int hi = m;  // infeasible
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

CountResult approx_log_Z(const BipartiteGraph& g, const RealFugacities& lam, double epsilon,
                         const CountOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  validate(lam);
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  CountResult r;
  r.epsilon = epsilon;
  r.n_L = g.n_left();
  r.n_R = g.n_right();
  r.certificate = certify_kp(g, lam, options.eta, options.k_max);
  if (!r.certificate.valid()) throw CertificationError("certification failed; try `exact`");
  r.eta = r.certificate.eta;

  r.m_required = options.m_override ? *options.m_override : choose_m(std::max(r.n_R, 1), epsilon, r.eta);
  if (r.m_required < 1) throw std::invalid_argument("m must be >= 1");
  r.m_used = lam.lambda_R == 0.0 ? r.m_required
                                 : largest_feasible_m(g, r.m_required, options.limits);
  r.degraded = r.m_used < r.m_required;

  ExpansionOptions expansion;
  expansion.limits = options.limits;
  expansion.certified_eta = r.eta;
  const ExpansionEstimate<double> t = truncated_expansion(g, lam, r.m_used, expansion);
  r.expansion_value = t.value;
  r.error_bound = *t.error_bound;
  r.log_Z_estimate = r.n_L * std::log1p(lam.lambda_L) + t.value;
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ZeroProbeReport zero_probe(const BipartiteGraph& g, const ComplexRegion& region, int samples,
                           std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  ZeroProbeReport report;
  report.region_condition = check_complex_region(DegreeParams::of(degree_profile(g)), region);
  if (!report.region_condition.holds) {
    throw CertificationError("region condition fails; the probe would be vacuous");
  }
  if (g.n_vertices() > kMaxComplexVertices) {
    throw SizeCapExceeded("complex evaluation supports at most 24 vertices");
  }

  auto rng = make_rng(seed);
  const double two_pi = 2.0 * std::numbers::pi;
  const double outer = 1.0 + region.Lambda_L;
  report.samples = samples;
  report.boundary_samples = (samples + 1) / 2;
  report.min_abs_Z = std::numeric_limits<double>::infinity();
  report.min_abs_Xi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    double radius_R = region.Lambda_R;
    double radius_L = outer;
    if (i >= report.boundary_samples) {
      radius_R *= std::sqrt(uniform01(rng));
      radius_L *= 1.0 + uniform01(rng);
    }
    const double theta_R = two_pi * uniform01(rng);
    const double theta_L = two_pi * uniform01(rng);
    ComplexFugacities lam;
    lam.lambda_R = std::polar(radius_R, theta_R);
    lam.lambda_L = std::polar(radius_L, theta_L) - 1.0;
    const double abs_z = std::abs(exact_Z(g, lam));
    const double abs_xi = abs_z / std::pow(std::abs(1.0 + lam.lambda_L), g.n_left());
    if (abs_z == 0.0) ++report.zeros_found;
    if (abs_z < report.min_abs_Z) {
      report.min_abs_Z = abs_z;
      report.argmin = lam;
    }
    report.min_abs_Xi = std::min(report.min_abs_Xi, abs_xi);
  }
  return report;
}

}  // namespace bihc
