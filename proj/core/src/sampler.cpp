#include "bihc/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bihc/connected_subsets.hpp"
#include "bihc/counting.hpp"
#include "bihc/errors.hpp"
#include "bihc/numeric.hpp"

namespace bihc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

}  // namespace

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

PolymerSampler::PolymerSampler(const BipartiteGraph& g, const RealFugacities& lam,
                               double epsilon, const SamplerOptions& options)
    : g_(g), lam_(lam), options_(options) {
  validate(lam);
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const int n_right = g.n_right();
  if (n_right > 64) throw SizeCapExceeded("the sampler supports at most 64 right vertices");
  stats_.step_budget = epsilon / (2.0 * std::max(n_right, 1));

  int max_size = n_right;
  if (options.backend == MarginalBackend::Exact) {
    if (n_right > kMaxExactSamplerRight) {
      throw SizeCapExceeded("exact marginals support at most " +
                            std::to_string(kMaxExactSamplerRight) + " right vertices");
    }
    stats_.certificate = certify_kp(g, lam, options.eta, options.k_max);
  } else {
    stats_.certificate = certify_kp(g, lam, options.eta, options.k_max);
    if (!stats_.certificate.valid()) throw CertificationError("certification failed; try `exact`");
    // Each log Xi within step_budget / 2 keeps every ratio within step_budget.
    const double per_value = stats_.step_budget / 2.0;
    stats_.m_required = choose_m(std::max(n_right, 1), per_value, stats_.certificate.eta);
    const int capped = std::min(stats_.m_required, std::max(options.max_m, 1));
    stats_.m = lam.lambda_R == 0.0 ? capped : largest_feasible_m(g, capped, options.limits);
    stats_.degraded = stats_.m < stats_.m_required;
    max_size = std::max(stats_.m, 1);
  }

  candidates_.assign(static_cast<std::size_t>(n_right), {});
  if (lam.lambda_R == 0.0) return;

  const TwoLinkedAdjacency adj(g);
  const double log_lr = std::log(lam.lambda_R);
  const double log_lp = std::log1p(lam.lambda_L);
  for (int v = 0; v < n_right; ++v) {
    std::vector<char> blocked(static_cast<std::size_t>(n_right), 0);
    std::fill(blocked.begin(), blocked.begin() + v, char{1});
    detail::for_each_connected_subset(
        v, [&adj](int u) { return adj.neighbors(u); },
        [max_size](int, const std::vector<int>& members) {
          return static_cast<int>(members.size()) < max_size;
        },
        [&](const std::vector<int>& members) {
          Polymer p;
          p.vertices = members;
          std::sort(p.vertices.begin(), p.vertices.end());
          p.neighborhood_size = neighborhood_size(g, p.vertices);
          Candidate c;
          for (int r : p.vertices) {
            c.own |= bit(r);
            c.blocked |= bit(r);
            for (int nb : adj.neighbors(r)) c.blocked |= bit(nb);
          }
          c.log_weight = p.size() * log_lr - p.neighborhood_size * log_lp;
          c.index = static_cast<int>(polymers_.size());
          polymers_.push_back(std::move(p));
          candidates_[static_cast<std::size_t>(v)].push_back(c);
        },
        std::move(blocked));
  }
}

double PolymerSampler::log_xi(std::uint64_t allowed) {
  if (allowed == 0 || lam_.lambda_R == 0.0) return 0.0;
  if (auto it = memo_.find(allowed); it != memo_.end()) return it->second;
  const double value = options_.backend == MarginalBackend::Exact ? exact_log_xi(allowed)
                                                                  : truncated_log_xi(allowed);
  memo_.emplace(allowed, value);
  return value;
}

// Xi(U) = Xi(U - u) + sum_{gamma ni u, gamma in U} w_gamma Xi(U - N2[gamma]), u = min U.
double PolymerSampler::exact_log_xi(std::uint64_t allowed) {
  const int u = std::countr_zero(allowed);
  double total = log_xi(allowed & ~bit(u));
  for (const Candidate& c : candidates_[static_cast<std::size_t>(u)]) {
    if ((c.own & ~allowed) == 0) total = log_add_exp(total, c.log_weight + log_xi(allowed & ~c.blocked));
  }
  return total;
}

double PolymerSampler::truncated_log_xi(std::uint64_t allowed) {
  ExpansionOptions opts;
  opts.limits = options_.limits;
  opts.allowed.assign(static_cast<std::size_t>(g_.n_right()), 0);
  for (std::uint64_t f = allowed; f; f &= f - 1) opts.allowed[static_cast<std::size_t>(std::countr_zero(f))] = 1;
  return truncated_expansion(g_, lam_, stats_.m, opts).value;
}

PolymerConfig PolymerSampler::sample_config(std::mt19937_64& rng) {
  PolymerConfig config;
  const int n_right = g_.n_right();
  std::uint64_t allowed = n_right == 64 ? ~std::uint64_t{0} : bit(n_right) - 1;
  std::vector<double> logs;
  std::vector<const Candidate*> options;
  for (int v = 0; v < n_right; ++v) {
    if (!(allowed & bit(v))) continue;
    config.decided.push_back(v);
    logs.assign(1, log_xi(allowed & ~bit(v)));
    options.assign(1, nullptr);
    for (const Candidate& c : candidates_[static_cast<std::size_t>(v)]) {
      if ((c.own & ~allowed) == 0) {
        logs.push_back(c.log_weight + log_xi(allowed & ~c.blocked));
        options.push_back(&c);
      }
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    double total = 0.0;
    for (double& l : logs) {
      l = std::exp(l - top);
      total += l;
    }
    double target = uniform01(rng) * total;
    std::size_t pick = 0;
    for (; pick + 1 < logs.size(); ++pick) {
      if (target < logs[pick]) break;
      target -= logs[pick];
    }
    if (const Candidate* c = options[pick]) {
      config.chosen.push_back(polymers_[static_cast<std::size_t>(c->index)]);
      allowed &= ~c->blocked;
    } else {
      allowed &= ~bit(v);
    }
  }
  return config;
}

VertexSet PolymerSampler::sample_independent_set(std::mt19937_64& rng) {
  const PolymerConfig config = sample_config(rng);
  return extend_to_independent_set(g_, config, lam_, rng);
}

VertexSet extend_to_independent_set(const BipartiteGraph& g, const PolymerConfig& config,
                                    const RealFugacities& lam, std::mt19937_64& rng) {
  std::vector<char> occupied(static_cast<std::size_t>(g.n_right()), 0);
  VertexSet right_part;
  for (const Polymer& p : config.chosen) {
    for (int r : p.vertices) {
      if (r < 0 || r >= g.n_right() || occupied[static_cast<std::size_t>(r)]) {
        throw std::invalid_argument("polymer configuration is not valid for this graph");
      }
      occupied[static_cast<std::size_t>(r)] = 1;
      right_part.push_back(right(r));
    }
  }
  const double p_in = lam.lambda_L / (1.0 + lam.lambda_L);
  VertexSet out;
  for (int u = 0; u < g.n_left(); ++u) {
    bool blocked = false;
    for (int r : g.neighbors_of_left(u)) blocked |= occupied[static_cast<std::size_t>(r)] != 0;
    if (!blocked && uniform01(rng) < p_in) out.push_back(left(u));
  }
  std::sort(right_part.begin(), right_part.end());
  out.insert(out.end(), right_part.begin(), right_part.end());
  return out;
}

VertexSet extend_to_independent_set(const BipartiteGraph& g, const PolymerConfig& config,
                                    const RealFugacities& lam, std::uint64_t seed) {
  auto rng = make_rng(seed);
  return extend_to_independent_set(g, config, lam, rng);
}

PolymerConfig sample_polymer_config(const BipartiteGraph& g, const RealFugacities& lam,
                                    double epsilon, std::uint64_t seed,
                                    const SamplerOptions& options) {
  PolymerSampler sampler(g, lam, epsilon, options);
  auto rng = make_rng(seed);
  return sampler.sample_config(rng);
}

VertexSet sample_independent_set(const BipartiteGraph& g, const RealFugacities& lam,
                                 double epsilon, std::uint64_t seed,
                                 const SamplerOptions& options) {
  PolymerSampler sampler(g, lam, epsilon, options);
  auto rng = make_rng(seed);
  return sampler.sample_independent_set(rng);
}

std::vector<VertexSet> sample_independent_sets(const BipartiteGraph& g, const RealFugacities& lam,
                                               double epsilon, std::uint64_t seed,
                                               std::size_t count, const SamplerOptions& options) {
  PolymerSampler sampler(g, lam, epsilon, options);
  std::vector<VertexSet> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = make_rng(seed, i);
    out.push_back(sampler.sample_independent_set(rng));
  }
  return out;
}

}  // namespace bihc
