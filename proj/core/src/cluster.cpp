#include "bihc/cluster.hpp"

#include <algorithm>
#include <atomic>
#include <complex>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "bihc/connected_subsets.hpp"
#include "bihc/errors.hpp"
#include "bihc/numeric.hpp"

namespace bihc {

PolymerSystem PolymerSystem::build(const BipartiteGraph& g, int max_size,
                                   const std::vector<char>& allowed) {
  PolymerSystem sys;
  sys.n_right = allowed.empty()
                    ? g.n_right()
                    : static_cast<int>(std::count(allowed.begin(), allowed.end(), char{1}));
  sys.polymers = enumerate_all_polymers(g, max_size, allowed);
  const std::size_t n = sys.polymers.size();
  sys.incompatible.assign(n, {});

  // Bucket polymers by vertex so candidates come from the 2-linked closure.
  const TwoLinkedAdjacency adj(g);
  std::vector<std::vector<int>> by_vertex(static_cast<std::size_t>(g.n_right()));
  for (std::size_t i = 0; i < n; ++i) {
    for (int r : sys.polymers[i].vertices) by_vertex[static_cast<std::size_t>(r)].push_back(static_cast<int>(i));
  }
  std::vector<int> stamp(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    auto& out = sys.incompatible[i];
    const auto take = [&](int r) {
      for (int j : by_vertex[static_cast<std::size_t>(r)]) {
        if (j != static_cast<int>(i) && stamp[static_cast<std::size_t>(j)] != static_cast<int>(i)) {
          stamp[static_cast<std::size_t>(j)] = static_cast<int>(i);
          out.push_back(j);
        }
      }
    };
    for (int r : sys.polymers[i].vertices) {
      take(r);
      for (int nb : adj.neighbors(r)) take(nb);
    }
    std::sort(out.begin(), out.end());
  }
  return sys;
}

std::int64_t Cluster::ordering_multiplier() const {
  std::int64_t denom = 1;
  for (int m : multiplicities) denom *= factorial(m);
  return factorial(slots) / denom;
}

Rational Cluster::ursell() const { return Rational(signed_sum, factorial(slots)); }

double Cluster::coefficient() const {
  std::int64_t denom = 1;
  for (int m : multiplicities) denom *= factorial(m);
  return static_cast<double>(signed_sum) / static_cast<double>(denom);
}

namespace {

// Connected sets of distinct polymers containing `anchor`, all other members
// greater than it, with total size <= budget. Members arrive sorted.
template <class OnSupport>
void for_each_support(const PolymerSystem& sys, int anchor, int budget, OnSupport&& on_support) {
  if (sys.polymers[static_cast<std::size_t>(anchor)].size() > budget) return;
  std::vector<char> blocked(sys.polymers.size(), 0);
  std::fill(blocked.begin(), blocked.begin() + anchor, char{1});
  std::vector<int> sorted;
  detail::for_each_connected_subset(
      anchor,
      [&sys](int u) -> const std::vector<int>& { return sys.incompatible[static_cast<std::size_t>(u)]; },
      [&sys, budget](int u, const std::vector<int>& members) {
        int total = sys.polymers[static_cast<std::size_t>(u)].size();
        for (int x : members) total += sys.polymers[static_cast<std::size_t>(x)].size();
        return total <= budget;
      },
      [&](const std::vector<int>& members) {
        sorted = members;
        std::sort(sorted.begin(), sorted.end());
        on_support(sorted);
      },
      std::move(blocked));
}

struct SupportShape {
  std::vector<int> sizes;
  int slack = 0;  // budget minus the size of the support itself
};

SupportShape shape_of(const PolymerSystem& sys, const std::vector<int>& support, int budget,
                      const ClusterLimits& limits) {
  SupportShape shape;
  int base = 0;
  int min_size = std::numeric_limits<int>::max();
  for (int p : support) {
    const int s = sys.polymers[static_cast<std::size_t>(p)].size();
    shape.sizes.push_back(s);
    base += s;
    min_size = std::min(min_size, s);
  }
  shape.slack = budget - base;
  const int max_slots = static_cast<int>(support.size()) + shape.slack / min_size;
  if (max_slots > limits.max_slots) {
    throw ResourceCapExceeded("cluster expansion needs more than " +
                              std::to_string(limits.max_slots) + " polymer slots");
  }
  return shape;
}

// Number of vectors k >= 0 with sum k_i sizes_i <= slack.
std::size_t count_multiplicities(const std::vector<int>& sizes, int slack) {
  std::vector<std::size_t> ways(static_cast<std::size_t>(slack) + 1, 0);
  ways[0] = 1;
  for (int s : sizes)
    for (int e = s; e <= slack; ++e) ways[static_cast<std::size_t>(e)] += ways[static_cast<std::size_t>(e - s)];
  std::size_t total = 0;
  for (std::size_t w : ways) total += w;
  return total;
}

// Signed-sum tables keyed by support shape: the type graph, polymer sizes and
// budget. Supports with the same shape share a table.
class TableCache {
 public:
  const SignedSumTable& get(const std::vector<std::uint32_t>& adjacency,
                            const std::vector<int>& sizes, const std::vector<int>& max_mult,
                            int budget) {
    key_.clear();
    key_.push_back(static_cast<std::uint32_t>(budget));
    key_.insert(key_.end(), adjacency.begin(), adjacency.end());
    for (int s : sizes) key_.push_back(static_cast<std::uint32_t>(s));
    if (auto it = tables_.find(key_); it != tables_.end()) return it->second;
    if (tables_.size() >= kMaxEntries) tables_.clear();
    return tables_.try_emplace(key_, adjacency, max_mult, sizes, budget).first->second;
  }

 private:
  static constexpr std::size_t kMaxEntries = 1 << 16;
  std::vector<std::uint32_t> key_;
  std::map<std::vector<std::uint32_t>, SignedSumTable> tables_;
};

void clusters_on_support(const PolymerSystem& sys, const std::vector<int>& support,
                         const SupportShape& shape, int budget, TableCache& cache,
                         const std::function<void(const Cluster&)>& visit) {
  const std::size_t k = support.size();
  std::vector<std::uint32_t> adjacency(k, 0u);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& inc = sys.incompatible[static_cast<std::size_t>(support[i])];
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j && std::binary_search(inc.begin(), inc.end(), support[j])) adjacency[i] |= 1u << j;
    }
  }
  std::vector<int> max_mult(k);
  for (std::size_t i = 0; i < k; ++i) max_mult[i] = 1 + shape.slack / shape.sizes[i];
  const SignedSumTable& table = cache.get(adjacency, shape.sizes, max_mult, budget);

  Cluster c;
  c.polymers = support;
  c.multiplicities.assign(k, 1);
  const auto assign = [&](auto&& self, std::size_t i, int slack) -> void {
    if (i == k) {
      c.signed_sum = table.at(c.multiplicities);
      c.total_size = budget - slack;
      c.slots = 0;
      for (int m : c.multiplicities) c.slots += m;
      visit(c);
      return;
    }
    for (int extra = 0; extra * shape.sizes[i] <= slack; ++extra) {
      c.multiplicities[i] = 1 + extra;
      self(self, i + 1, slack - extra * shape.sizes[i]);
    }
    c.multiplicities[i] = 1;
  };
  assign(assign, 0, shape.slack);
}

void clusters_from_anchor(const PolymerSystem& sys, int anchor, int m, const ClusterLimits& limits,
                          TableCache& cache, const std::function<void(const Cluster&)>& visit) {
  const int budget = m - 1;
  for_each_support(sys, anchor, budget, [&](const std::vector<int>& support) {
    clusters_on_support(sys, support, shape_of(sys, support, budget, limits), budget, cache, visit);
  });
}

}  // namespace

std::size_t count_clusters(const PolymerSystem& sys, int m, const ClusterLimits& limits) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  const int budget = m - 1;
  std::size_t total = 0;
  for (int anchor = 0; anchor < static_cast<int>(sys.polymers.size()); ++anchor) {
    for_each_support(sys, anchor, budget, [&](const std::vector<int>& support) {
      const SupportShape shape = shape_of(sys, support, budget, limits);
      total += count_multiplicities(shape.sizes, shape.slack);
      if (total > limits.max_clusters) {
        throw ResourceCapExceeded("cluster count exceeds cap of " +
                                  std::to_string(limits.max_clusters));
      }
    });
  }
  return total;
}

void for_each_cluster(const PolymerSystem& sys, int m,
                      const std::function<void(const Cluster&)>& visit,
                      const ClusterLimits& limits) {
  count_clusters(sys, m, limits);
  TableCache cache;
  for (int anchor = 0; anchor < static_cast<int>(sys.polymers.size()); ++anchor) {
    clusters_from_anchor(sys, anchor, m, limits, cache, visit);
  }
}

std::vector<Cluster> enumerate_clusters(const BipartiteGraph& g, int m,
                                        const ClusterLimits& limits) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  std::vector<Cluster> out;
  if (m == 1) return out;
  const PolymerSystem sys = PolymerSystem::build(g, m - 1);
  for_each_cluster(sys, m, [&out](const Cluster& c) { out.push_back(c); }, limits);
  return out;
}

template <class Scalar>
Scalar cluster_sum(const PolymerSystem& sys, const std::vector<Scalar>& polymer_weights, int m,
                   const std::function<double(const Cluster&)>& factor,
                   const ClusterLimits& limits) {
  if (polymer_weights.size() != sys.polymers.size()) {
    throw std::invalid_argument("one weight per polymer required");
  }
  count_clusters(sys, m, limits);

  const int anchors = static_cast<int>(sys.polymers.size());
  std::vector<CompensatedSum<Scalar>> partial(static_cast<std::size_t>(anchors));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    try {
      TableCache cache;
      for (int a = next++; a < anchors; a = next++) {
        auto& acc = partial[static_cast<std::size_t>(a)];
        clusters_from_anchor(sys, a, m, limits, cache, [&](const Cluster& c) {
          Scalar term = c.weight(polymer_weights);
          if (factor) term *= factor(c);
          acc.add(term);
        });
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = anchors;
    }
  };

  int threads = limits.threads > 0 ? limits.threads
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(anchors, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  CompensatedSum<Scalar> total;
  for (const auto& p : partial) total.add(p.value());
  return total.value();
}

template double cluster_sum<double>(const PolymerSystem&, const std::vector<double>&, int,
                                    const std::function<double(const Cluster&)>&,
                                    const ClusterLimits&);
template std::complex<double> cluster_sum<std::complex<double>>(
    const PolymerSystem&, const std::vector<std::complex<double>>&, int,
    const std::function<double(const Cluster&)>&, const ClusterLimits&);

template <class Scalar>
ExpansionEstimate<Scalar> truncated_expansion(const BipartiteGraph& g,
                                              const Fugacities<Scalar>& lam, int m,
                                              const ExpansionOptions& options) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  validate(lam);
  if (!options.allowed.empty() && static_cast<int>(options.allowed.size()) != g.n_right()) {
    throw std::invalid_argument("allowed mask must have one entry per right vertex");
  }
  ExpansionEstimate<Scalar> est;
  est.m = m;
  const int n_right = options.allowed.empty()
                          ? g.n_right()
                          : static_cast<int>(std::count(options.allowed.begin(),
                                                        options.allowed.end(), char{1}));
  if (options.certified_eta) {
    est.eta = *options.certified_eta;
    est.error_bound = n_right * std::exp(-m * est.eta);
  }
  if (m == 1 || lam.lambda_R == Scalar(0) || n_right == 0) return est;

  const PolymerSystem sys = PolymerSystem::build(g, m - 1, options.allowed);
  est.value = cluster_sum(sys, sys.weights(lam), m, {}, options.limits);
  return est;
}

template ExpansionEstimate<double> truncated_expansion<double>(const BipartiteGraph&,
                                                               const RealFugacities&, int,
                                                               const ExpansionOptions&);
template ExpansionEstimate<std::complex<double>> truncated_expansion<std::complex<double>>(
    const BipartiteGraph&, const ComplexFugacities&, int, const ExpansionOptions&);

void write_cluster_dump(std::ostream& out, const PolymerSystem& sys,
                        const std::vector<double>& polymer_weights, int m,
                        const ClusterLimits& limits) {
  out << "# multiplicities\tsizes\tursell\tweight\n";
  for_each_cluster(
      sys, m,
      [&](const Cluster& c) {
        for (std::size_t i = 0; i < c.multiplicities.size(); ++i) {
          out << (i ? "," : "") << c.multiplicities[i];
        }
        out << '\t';
        for (std::size_t i = 0; i < c.polymers.size(); ++i) {
          out << (i ? "," : "") << sys.polymers[static_cast<std::size_t>(c.polymers[i])].size();
        }
        const Rational phi = c.ursell();
        out << '\t' << phi.numerator() << '/' << phi.denominator() << '\t'
            << c.weight(polymer_weights) << '\n';
      },
      limits);
}

}  // namespace bihc
