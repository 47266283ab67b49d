#pragma once

#include <string>
#include <vector>

#include "bihc/graph.hpp"
#include "bihc/polymer.hpp"

namespace bihc {

/// Degree parameters of the class G(Delta_L, delta_R, Delta_R).
struct DegreeParams {
  int Delta_L = 1;
  int delta_R = 1;
  int Delta_R = 1;

  static DegreeParams of(const DegreeProfile& p) {
    return {p.delta_L_max, p.delta_R_min, p.delta_R_max};
  }
};

/// Relative tolerance under which lhs and rhs count as equal.
inline constexpr double kBoundaryTolerance = 1e-12;

/// lhs <= rhs, with both sides kept for reporting. `boundary` marks a
/// comparison within the guard band; such cases count as holding.
struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool boundary = false;

  double ratio() const { return lhs / rhs; }
};

InequalityCheck compare_le(double lhs, double rhs);

/// 6 Delta_L Delta_R lambda_R <= (1 + lambda_L)^{delta_R / Delta_L}.
/// Requires Delta_L >= 1 and Delta_R >= delta_R >= 0.
InequalityCheck check_main_condition(const DegreeParams& d, const RealFugacities& lam);

/// Hypothesis of one part of the corollary:
///   1: Delta-regular and lambda_L >= 6 Delta^2 lambda_R;
///   2: biregular, Delta_R > Delta_L, lambda_L = lambda_R = lambda and
///      lambda > (6 Delta_L Delta_R)^{Delta_L / (Delta_R - Delta_L)};
///   3: biregular, lambda_L = lambda_R = 1, Delta_L >= 6 and
///      Delta_R >= 7 Delta_L log(Delta_L).
/// Throws std::invalid_argument when the structural hypothesis does not match.
InequalityCheck check_corollary(const DegreeParams& d, const RealFugacities& lam, int part);

/// Complex-region condition 6 Delta_L Delta_R Lambda_R <= (1 + Lambda_L)^{delta_R / Delta_L}.
InequalityCheck check_complex_region(const DegreeParams& d, const ComplexRegion& region);

inline bool in_region(const ComplexFugacities& lam, const ComplexRegion& region) {
  return region.contains(lam);
}

/// sum_{k=1}^{terms} s^k / k^{3/2}.
double kp_series_sum(double s, long terms);

inline constexpr double kAnalyticEta = 0.1;
inline constexpr double kSeriesThreshold = 0.832;

enum class CertificateMode { Analytic, Empirical, Failed, Inconclusive };

std::string to_string(CertificateMode mode);

struct KPCertificate {
  double eta = kAnalyticEta;
  CertificateMode mode = CertificateMode::Inconclusive;
  /// Worst (largest) ratio of left side to bound; <= 1 when certified.
  double worst_ratio = 0.0;
  /// Per right vertex (empirical mode) or a single entry (analytic mode).
  std::vector<double> per_vertex_ratios;
  bool boundary = false;
  std::string provenance;

  bool valid() const {
    return mode == CertificateMode::Analytic || mode == CertificateMode::Empirical;
  }
};

/// Analytic certificate (eta = 0.1) whenever the main condition holds for the
/// graph's own degree profile; otherwise per-vertex truncated sums plus tails
/// at the requested eta.
KPCertificate certify_kp(const BipartiteGraph& g, const RealFugacities& lam, double eta,
                         int k_max);

/// The same decision for an explicit class the graph belongs to.
KPCertificate certify_kp(const BipartiteGraph& g, const RealFugacities& lam, double eta,
                         int k_max, const DegreeProfile& cls);

/// Empirical per-vertex check only, never the analytic shortcut.
KPCertificate certify_kp_empirical(const BipartiteGraph& g, double abs_lambda_R,
                                   double abs_one_plus_lambda_L, double eta, int k_max,
                                   const DegreeProfile& cls);

}  // namespace bihc
