#include "bihc/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bihc {

InequalityCheck compare_le(double lhs, double rhs) {
  InequalityCheck c;
  c.lhs = lhs;
  c.rhs = rhs;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  c.boundary = std::abs(lhs - rhs) <= kBoundaryTolerance * scale;
  c.holds = lhs <= rhs || c.boundary;
  return c;
}

namespace {

void require_degrees(const DegreeParams& d) {
  if (d.Delta_L < 1 || d.Delta_R < 1 || d.delta_R < 0 || d.delta_R > d.Delta_R) {
    throw std::invalid_argument("need Delta_L >= 1 and Delta_R >= delta_R >= 0");
  }
}

double imbalance_rhs(double one_plus_lambda_L, const DegreeParams& d) {
  return std::exp(static_cast<double>(d.delta_R) / d.Delta_L * std::log(one_plus_lambda_L));
}

}  // namespace

InequalityCheck check_main_condition(const DegreeParams& d, const RealFugacities& lam) {
  require_degrees(d);
  validate(lam);
  return compare_le(6.0 * d.Delta_L * d.Delta_R * lam.lambda_R,
                    imbalance_rhs(1.0 + lam.lambda_L, d));
}

InequalityCheck check_corollary(const DegreeParams& d, const RealFugacities& lam, int part) {
  require_degrees(d);
  validate(lam);
  const bool biregular = d.delta_R == d.Delta_R;
  switch (part) {
    case 1: {
      if (!(biregular && d.Delta_L == d.Delta_R)) {
        throw std::invalid_argument("part 1 needs a regular graph");
      }
      const double delta = d.Delta_L;
      return compare_le(6.0 * delta * delta * lam.lambda_R, lam.lambda_L);
    }
    case 2: {
      if (!biregular || d.Delta_R <= d.Delta_L) {
        throw std::invalid_argument("part 2 needs a biregular graph with Delta_R > Delta_L");
      }
      if (lam.lambda_L != lam.lambda_R) {
        throw std::invalid_argument("part 2 needs a single fugacity lambda_L = lambda_R");
      }
      const double threshold =
          std::pow(6.0 * d.Delta_L * d.Delta_R,
                   static_cast<double>(d.Delta_L) / (d.Delta_R - d.Delta_L));
      InequalityCheck c = compare_le(threshold, lam.lambda_L);
      c.holds = threshold < lam.lambda_L && !c.boundary;  // strict
      return c;
    }
    case 3: {
      if (!biregular) throw std::invalid_argument("part 3 needs a biregular graph");
      if (lam.lambda_L != 1.0 || lam.lambda_R != 1.0) {
        throw std::invalid_argument("part 3 needs lambda = 1");
      }
      if (d.Delta_L < 6) throw std::invalid_argument("part 3 covers Delta_L >= 6 only");
      return compare_le(7.0 * d.Delta_L * std::log(static_cast<double>(d.Delta_L)), d.Delta_R);
    }
    default:
      throw std::invalid_argument("corollary part must be 1, 2 or 3");
  }
}

InequalityCheck check_complex_region(const DegreeParams& d, const ComplexRegion& region) {
  require_degrees(d);
  if (!(region.Lambda_L > 0.0) || !(region.Lambda_R > 0.0)) {
    throw std::invalid_argument("region radii must be positive");
  }
  return compare_le(6.0 * d.Delta_L * d.Delta_R * region.Lambda_R,
                    imbalance_rhs(1.0 + region.Lambda_L, d));
}

double kp_series_sum(double s, long terms) {
  double sum = 0.0;
  double carry = 0.0;
  for (long k = terms; k >= 1; --k) {  // smallest terms first
    const double term = std::exp(k * std::log(s) - 1.5 * std::log(static_cast<double>(k)));
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::string to_string(CertificateMode mode) {
  switch (mode) {
    case CertificateMode::Analytic: return "analytic";
    case CertificateMode::Empirical: return "empirical";
    case CertificateMode::Failed: return "failed";
    case CertificateMode::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

KPCertificate certify_kp_empirical(const BipartiteGraph& g, double abs_lambda_R,
                                   double abs_one_plus_lambda_L, double eta, int k_max,
                                   const DegreeProfile& cls) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  KPCertificate cert;
  cert.eta = eta;
  cert.provenance = "per-vertex sums up to size " + std::to_string(k_max) + " plus geometric tail";
  if (abs_lambda_R == 0.0) {
    cert.mode = CertificateMode::Empirical;
    cert.per_vertex_ratios.assign(static_cast<std::size_t>(g.n_right()), 0.0);
    cert.provenance = "lambda_R = 0: every polymer weight vanishes";
    return cert;
  }
  bool failed = false;
  bool inconclusive = false;
  for (int v = 0; v < g.n_right(); ++v) {
    const KPVertexSum s =
        kp_vertex_sum(g, v, abs_lambda_R, abs_one_plus_lambda_L, eta, k_max, cls);
    const double ratio = s.ratio();
    cert.per_vertex_ratios.push_back(ratio);
    cert.worst_ratio = std::max(cert.worst_ratio, ratio);
    if (s.status == KPStatus::Violated) failed = true;
    if (s.status == KPStatus::Inconclusive) inconclusive = true;
    if (std::isfinite(ratio) && std::abs(ratio - 1.0) <= kBoundaryTolerance) cert.boundary = true;
  }
  cert.mode = failed         ? CertificateMode::Failed
              : inconclusive ? CertificateMode::Inconclusive
                             : CertificateMode::Empirical;
  return cert;
}

KPCertificate certify_kp(const BipartiteGraph& g, const RealFugacities& lam, double eta,
                         int k_max, const DegreeProfile& cls) {
  validate(lam);
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (lam.lambda_R > 0.0 && cls.delta_L_max >= 1 && cls.delta_R_max >= 1) {
    const DegreeParams d = DegreeParams::of(cls);
    const InequalityCheck main = check_main_condition(d, lam);
    if (main.holds) {
      KPCertificate cert;
      cert.eta = kAnalyticEta;
      cert.mode = CertificateMode::Analytic;
      // (D + 1) q e^{3/2 + eta} against the series threshold.
      const double q = weight_decay_ratio(lam.lambda_R, 1.0 + lam.lambda_L, d.delta_R, d.Delta_L);
      const double s = (d.Delta_R * (d.Delta_L - 1) + 1.0) * q * std::exp(1.5 + kAnalyticEta);
      cert.worst_ratio = s / kSeriesThreshold;
      cert.per_vertex_ratios = {cert.worst_ratio};
      cert.boundary = main.boundary;
      cert.provenance =
          "imbalance condition => (D+1)q <= 1/6 => s <= 0.832 => series < e/2, eta = 0.1";
      return cert;
    }
  }
  return certify_kp_empirical(g, lam.lambda_R, 1.0 + lam.lambda_L, eta, k_max, cls);
}

KPCertificate certify_kp(const BipartiteGraph& g, const RealFugacities& lam, double eta,
                         int k_max) {
  return certify_kp(g, lam, eta, k_max, degree_profile(g));
}

}  // namespace bihc
