#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "bihc/graph.hpp"

namespace bihc {

/// x^n for n >= 0 by repeated squaring; exact at x = 0 for real and complex x.
template <class Scalar>
Scalar ipow(Scalar x, int n) {
  Scalar result(1);
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

/// Fugacity pair (lambda_L, lambda_R). `Scalar` is double for the counting
/// and sampling paths, std::complex<double> for zero-freeness probes.
template <class Scalar>
struct Fugacities {
  Scalar lambda_L{};
  Scalar lambda_R{};
};

using RealFugacities = Fugacities<double>;
using ComplexFugacities = Fugacities<std::complex<double>>;

/// Real mode: both finite and nonnegative. Complex mode: 1 + lambda_L != 0.
/// Throws std::invalid_argument otherwise.
void validate(const RealFugacities& lam);
void validate(const ComplexFugacities& lam);

inline ComplexFugacities to_complex(const RealFugacities& lam) {
  return {std::complex<double>(lam.lambda_L), std::complex<double>(lam.lambda_R)};
}

/// Closed polydisc-like region {|lambda_R| <= Lambda_R, |1 + lambda_L| >= 1 + Lambda_L}.
struct ComplexRegion {
  double Lambda_L = 0.0;
  double Lambda_R = 0.0;

  bool contains(const ComplexFugacities& lam) const {
    return std::abs(lam.lambda_R) <= Lambda_R && std::abs(1.0 + lam.lambda_L) >= 1.0 + Lambda_L;
  }
};

/// The square graph G^2 restricted to R: u ~ v iff u != v share an L-neighbor.
class TwoLinkedAdjacency {
 public:
  explicit TwoLinkedAdjacency(const BipartiteGraph& g);

  int n_right() const { return static_cast<int>(adj_.size()); }
  std::span<const int> neighbors(int r) const { return adj_[r]; }
  bool adjacent(int a, int b) const;
  int max_degree() const;

 private:
  std::vector<std::vector<int>> adj_;
};

/// A 2-linked subset of R together with |N(gamma)|.
struct Polymer {
  std::vector<int> vertices;  // sorted right indices
  int neighborhood_size = 0;

  int size() const { return static_cast<int>(vertices.size()); }

  template <class Scalar>
  Scalar weight(const Fugacities<Scalar>& lam) const {
    return ipow(lam.lambda_R, size()) / ipow(Scalar(1) + lam.lambda_L, neighborhood_size);
  }

  bool contains(int r) const;

  /// Canonical order: by size, then lexicographically by vertices.
  friend bool operator<(const Polymer& a, const Polymer& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.vertices < b.vertices;
  }
  friend bool operator==(const Polymer& a, const Polymer& b) { return a.vertices == b.vertices; }
};

/// |N(gamma)| for a set of right vertices.
int neighborhood_size(const BipartiteGraph& g, std::span<const int> gamma);

bool is_two_linked(const TwoLinkedAdjacency& adj, std::span<const int> gamma);

/// Validates that gamma is a nonempty 2-linked set of right vertices.
/// Throws std::invalid_argument otherwise.
Polymer make_polymer(const BipartiteGraph& g, const TwoLinkedAdjacency& adj,
                     std::vector<int> gamma);

/// lambda_R^{|gamma|} / (1 + lambda_L)^{|N(gamma)|}, after validating gamma.
template <class Scalar>
Scalar polymer_weight(const BipartiteGraph& g, std::span<const int> gamma,
                      const Fugacities<Scalar>& lam) {
  const TwoLinkedAdjacency adj(g);
  return make_polymer(g, adj, std::vector<int>(gamma.begin(), gamma.end())).weight(lam);
}

/// Streams every 2-linked set containing `root` with at most `k_max` vertices,
/// each exactly once, in a deterministic order. The callback receives the
/// (unsorted) member list.
void for_each_polymer_containing(const TwoLinkedAdjacency& adj, int root, int k_max,
                                 const std::function<void(std::span<const int>)>& visit);

/// Materialized form of the stream above, with neighborhood sizes populated.
std::vector<Polymer> enumerate_polymers(const BipartiteGraph& g, int root, int k_max);

/// Every polymer of size <= max_size whose vertices all lie in `allowed`
/// (empty = all of R), in canonical order.
std::vector<Polymer> enumerate_all_polymers(const BipartiteGraph& g, int max_size,
                                            const std::vector<char>& allowed = {});

/// True iff g1 union g2 is 2-linked. Reflexive and symmetric.
bool incompatible(const Polymer& g1, const Polymer& g2, const TwoLinkedAdjacency& adj);

/// (e * Delta_R * (Delta_L - 1))^{k-1} / k^{3/2}: the per-size count bound for
/// 2-linked sets through a fixed vertex.
double polymer_count_bound(int Delta_L, int Delta_R, int k);

/// |lambda_R| / |1 + lambda_L|^{delta_R / Delta_L}: the per-vertex weight bound.
double weight_decay_ratio(double abs_lambda_R, double abs_one_plus_lambda_L, int delta_R,
                          int Delta_L);

/// Right-hand side of the per-vertex summability condition:
/// 1 / (2 (Delta_R (Delta_L - 1) + 1)).
double kp_vertex_bound(int Delta_L, int Delta_R);

enum class KPStatus { Satisfied, Violated, Inconclusive };

struct KPVertexSum {
  double partial = 0.0;  // exact sum over polymers through v with |gamma| <= k_max
  double tail = 0.0;     // analytic bound on the rest; +inf when it diverges
  double bound = 0.0;
  KPStatus status = KPStatus::Inconclusive;

  double ratio() const { return (partial + tail) / bound; }
};

/// sum_{gamma ni v} |w_gamma| e^{(1/2 + eta)|gamma|}, truncated at k_max plus a
/// geometric tail built from the per-size count and weight bounds. Degree
/// parameters come from `cls` (the class the graph is certified in), which
/// must contain g.
KPVertexSum kp_vertex_sum(const BipartiteGraph& g, int v, double abs_lambda_R,
                          double abs_one_plus_lambda_L, double eta, int k_max,
                          const DegreeProfile& cls);

template <class Scalar>
KPVertexSum kp_vertex_sum(const BipartiteGraph& g, int v, const Fugacities<Scalar>& lam,
                          double eta, int k_max) {
  return kp_vertex_sum(g, v, std::abs(lam.lambda_R), std::abs(Scalar(1) + lam.lambda_L), eta,
                       k_max, degree_profile(g));
}

template <class Scalar>
KPVertexSum kp_vertex_sum(const BipartiteGraph& g, int v, const Fugacities<Scalar>& lam,
                          double eta, int k_max, const DegreeProfile& cls) {
  return kp_vertex_sum(g, v, std::abs(lam.lambda_R), std::abs(Scalar(1) + lam.lambda_L), eta,
                       k_max, cls);
}

}  // namespace bihc
