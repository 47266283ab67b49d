#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bihc/cluster.hpp"
#include "bihc/conditions.hpp"
#include "bihc/counting.hpp"
#include "bihc/cumulants.hpp"
#include "bihc/errors.hpp"
#include "bihc/graph.hpp"
#include "bihc/oracle.hpp"
#include "bihc/sampler.hpp"

namespace bihc::cli {

using json = nlohmann::json;

namespace {

struct Refusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  bool json_output = false;
  int threads = 0;

  std::string graph_path;
  std::optional<std::string> out_path;
  double lambda_l = 1.0;
  double lambda_r = 1.0;
  double lambda_l_re = 0.0, lambda_l_im = 0.0, lambda_r_re = 0.0, lambda_r_im = 0.0;
  double eps = 0.1;
  double eta = kAnalyticEta;
  std::optional<int> m;
  int k_max = 6;
  std::uint64_t seed = 0;
  std::size_t max_clusters = ClusterLimits{}.max_clusters;
  std::optional<std::string> dump_clusters;

  // exact
  std::vector<std::string> sets;

  // sample
  std::size_t draws = 1000;
  std::string backend = "truncated";

  // decay
  int max_set = 3;
  bool no_pairs = false;

  // zeros
  double region_l = 1.0;
  double region_r = 0.01;
  int samples = 500;

  // gen
  std::string family;
  int k = 1, a = 1, b = 1, d_l = 1, d_r = 1, n_l = 1, length = 4, n = 2;
};

ClusterLimits limits_of(const Settings& s) {
  ClusterLimits limits;
  limits.max_clusters = s.max_clusters;
  limits.threads = s.threads;
  return limits;
}

RealFugacities real_lambda(const Settings& s) { return {s.lambda_l, s.lambda_r}; }

VertexSet parse_vertex_set(const std::string& text) {
  VertexSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.size() < 2 || (item[0] != 'L' && item[0] != 'R')) {
      throw std::invalid_argument("vertex must look like L3 or R0: '" + item + "'");
    }
    std::size_t used = 0;
    const int index = std::stoi(item.substr(1), &used);
    if (used != item.size() - 1 || index < 0) throw std::invalid_argument("bad vertex index: '" + item + "'");
    out.push_back(item[0] == 'L' ? left(index) : right(index));
  }
  if (out.empty()) throw std::invalid_argument("empty vertex set");
  std::sort(out.begin(), out.end());
  return out;
}

json vertex_set_json(const VertexSet& set) {
  json arr = json::array();
  for (const Vertex& v : set) arr.push_back(json::array({v.side == Side::Left ? "L" : "R", v.index}));
  return arr;
}

json certificate_json(const KPCertificate& c) {
  return {{"mode", to_string(c.mode)},
          {"eta", c.eta},
          {"worst_ratio", c.worst_ratio},
          {"boundary", c.boundary},
          {"provenance", c.provenance}};
}

json inequality_json(const InequalityCheck& c) {
  return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}, {"boundary", c.boundary}};
}

// Writes to --out when given, else to the command's stdout.
class Sink {
 public:
  Sink(const Settings& s, std::ostream& fallback) : stream_(&fallback) {
    if (s.out_path) {
      file_.open(*s.out_path);
      if (!file_) throw std::invalid_argument("cannot open output file " + *s.out_path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int cmd_check(const Settings& s, std::ostream& out) {
  const BipartiteGraph g = load_graph_file(s.graph_path);
  const RealFugacities lam = real_lambda(s);
  validate(lam);
  const DegreeProfile profile = degree_profile(g);
  const DegreeParams d = DegreeParams::of(profile);

  json doc;
  doc["n_L"] = g.n_left();
  doc["n_R"] = g.n_right();
  doc["degree_profile"] = {{"delta_L_max", profile.delta_L_max},
                           {"delta_L_min", profile.delta_L_min},
                           {"delta_R_min", profile.delta_R_min},
                           {"delta_R_max", profile.delta_R_max}};
  std::optional<InequalityCheck> main;
  if (d.Delta_L >= 1 && d.Delta_R >= 1) main = check_main_condition(d, lam);
  doc["main_condition"] = main ? inequality_json(*main) : json(nullptr);
  json parts = json::object();
  for (int part = 1; part <= 3; ++part) {
    try {
      parts[std::to_string(part)] = inequality_json(check_corollary(d, lam, part));
    } catch (const std::invalid_argument& e) {
      parts[std::to_string(part)] = {{"applicable", false}, {"reason", e.what()}};
    }
  }
  doc["corollary"] = parts;
  const KPCertificate cert = certify_kp(g, lam, s.eta, s.k_max);
  doc["certificate"] = certificate_json(cert);

  if (s.json_output) {
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "graph: n_L=" << g.n_left() << " n_R=" << g.n_right() << " Delta_L=" << d.Delta_L
      << " delta_R=" << d.delta_R << " Delta_R=" << d.Delta_R << '\n';
  if (main) {
    out << "condition: " << (main->holds ? "true" : "false") << " (lhs " << main->lhs << ", rhs "
        << main->rhs << (main->boundary ? ", boundary" : "") << ")\n";
  } else {
    out << "condition: not applicable (no edges)\n";
  }
  for (auto& [part, value] : parts.items()) {
    out << "corollary part " << part << ": ";
    if (value.contains("applicable")) {
      out << "n/a (" << value["reason"].get<std::string>() << ")\n";
    } else {
      out << (value["holds"].get<bool>() ? "true" : "false") << '\n';
    }
  }
  out << "certificate: " << to_string(cert.mode) << ", eta = " << cert.eta
      << ", worst ratio = " << cert.worst_ratio << '\n';
  return kExitOk;
}

int cmd_count(const Settings& s, std::ostream& out, std::ostream& err) {
  const BipartiteGraph g = load_graph_file(s.graph_path);
  CountOptions options;
  options.eta = s.eta;
  options.k_max = s.k_max;
  options.m_override = s.m;
  options.limits = limits_of(s);
  CountResult r;
  try {
    r = approx_log_Z(g, real_lambda(s), s.eps, options);
  } catch (const CertificationError&) {
    throw Refusal("certification failed; try `exact`");
  }
  if (r.degraded) {
    err << "warning: cluster limits allow m = " << r.m_used << " (required " << r.m_required
        << "); error bound " << r.error_bound << " exceeds epsilon\n";
  }
  if (s.dump_clusters) {
    std::ofstream dump(*s.dump_clusters);
    if (!dump) throw std::invalid_argument("cannot open " + *s.dump_clusters);
    const PolymerSystem sys = PolymerSystem::build(g, std::max(r.m_used - 1, 0));
    write_cluster_dump(dump, sys, sys.weights(real_lambda(s)), r.m_used, options.limits);
  }
  const json doc = {{"log_Z_estimate", r.log_Z_estimate},
                    {"epsilon", r.epsilon},
                    {"m_used", r.m_used},
                    {"eta", r.eta},
                    {"certificate_mode", to_string(r.certificate.mode)},
                    {"error_bound", r.error_bound},
                    {"n_L", r.n_L},
                    {"n_R", r.n_R},
                    {"wall_time_ms", r.wall_time_ms}};
  Sink sink(s, out);
  sink.get() << doc.dump() << '\n';
  return kExitOk;
}

bool complex_mode(const Settings& s) {
  return s.lambda_l_re != 0.0 || s.lambda_l_im != 0.0 || s.lambda_r_re != 0.0 ||
         s.lambda_r_im != 0.0;
}

int cmd_exact(const Settings& s, std::ostream& out, bool complex_requested) {
  const BipartiteGraph g = load_graph_file(s.graph_path);
  json doc;
  if (complex_requested) {
    ComplexFugacities lam{{s.lambda_l_re, s.lambda_l_im}, {s.lambda_r_re, s.lambda_r_im}};
    validate(lam);
    const std::complex<double> z = exact_Z(g, lam);
    doc = {{"Z_re", z.real()}, {"Z_im", z.imag()}, {"abs_Z", std::abs(z)}};
    if (s.json_output) {
      out << doc.dump(2) << '\n';
    } else {
      out << "Z = " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i\n";
      out << "|Z| = " << std::abs(z) << '\n';
    }
    return kExitOk;
  }

  const RealFugacities lam = real_lambda(s);
  HardCoreOracle oracle(g, lam);
  const double log_z = oracle.log_Z();
  doc["log_Z"] = log_z;
  doc["Z"] = std::exp(log_z);
  if (g.n_right() <= kMaxExactXiRight) doc["log_Xi"] = exact_log_Xi(g, lam);
  json queries = json::array();
  for (const std::string& text : s.sets) {
    const VertexSet set = parse_vertex_set(text);
    json q = {{"set", vertex_set_json(set)}, {"marginal", oracle.marginal(set)}};
    if (set.size() <= static_cast<std::size_t>(kMaxPartitionSet)) q["cumulant"] = exact_cumulant(oracle, set);
    queries.push_back(q);
  }
  doc["queries"] = queries;
  if (s.json_output) {
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out.precision(12);
  out << "Z = " << std::exp(log_z) << '\n' << "log_Z = " << log_z << '\n';
  if (doc.contains("log_Xi")) out << "log_Xi = " << doc["log_Xi"].get<double>() << '\n';
  for (const json& q : queries) {
    out << "set " << q["set"].dump() << ": marginal = " << q["marginal"].get<double>();
    if (q.contains("cumulant")) out << ", cumulant = " << q["cumulant"].get<double>();
    out << '\n';
  }
  return kExitOk;
}

int cmd_sample(const Settings& s, std::ostream& out) {
  const BipartiteGraph g = load_graph_file(s.graph_path);
  SamplerOptions options;
  options.eta = s.eta;
  options.k_max = s.k_max;
  options.limits = limits_of(s);
  if (s.m) options.max_m = *s.m;
  if (s.backend == "exact") {
    options.backend = MarginalBackend::Exact;
  } else if (s.backend != "truncated") {
    throw std::invalid_argument("backend must be 'exact' or 'truncated'");
  }
  std::optional<PolymerSampler> sampler;
  try {
    sampler.emplace(g, real_lambda(s), s.eps, options);
  } catch (const CertificationError&) {
    throw Refusal("certification failed; try `exact`");
  }

  Sink sink(s, out);
  double left_total = 0.0;
  double right_total = 0.0;
  for (std::size_t i = 0; i < s.draws; ++i) {
    auto rng = make_rng(s.seed, i);
    const VertexSet set = sampler->sample_independent_set(rng);
    for (const Vertex& v : set) (v.side == Side::Left ? left_total : right_total) += 1.0;
    sink.get() << vertex_set_json(set).dump() << '\n';
  }
  const SamplerStats& stats = sampler->stats();
  const double n = static_cast<double>(std::max<std::size_t>(s.draws, 1));
  json summary = {{"draws", s.draws},
                  {"seed", s.seed},
                  {"backend", s.backend},
                  {"epsilon", s.eps},
                  {"certificate_mode", to_string(stats.certificate.mode)},
                  {"mean_left", left_total / n},
                  {"mean_right", right_total / n}};
  if (options.backend == MarginalBackend::Truncated) {
    summary["m"] = stats.m;
    summary["m_required"] = stats.m_required;
    summary["degraded"] = stats.degraded;
  }
  sink.get() << json{{"summary", summary}}.dump() << '\n';
  return kExitOk;
}

int cmd_decay(const Settings& s, std::ostream& out) {
  const BipartiteGraph g = load_graph_file(s.graph_path);
  std::vector<DecayQuery> queries;
  const int n_right = g.n_right();
  const int max_set = std::clamp(s.max_set, 0, std::min(n_right, kMaxSteinerTerminals));
  for (int size = 1; size <= max_set; ++size) {
    std::vector<int> pick(static_cast<std::size_t>(size));
    const auto choose = [&](auto&& self, int start, int depth) -> void {
      if (depth == size) {
        DecayQuery q;
        for (int r : pick) q.a.push_back(right(r));
        queries.push_back(q);
        return;
      }
      for (int r = start; r < n_right; ++r) {
        pick[static_cast<std::size_t>(depth)] = r;
        self(self, r + 1, depth + 1);
      }
    };
    choose(choose, 0, 0);
  }
  if (!s.no_pairs) {
    for (int u = 0; u < g.n_vertices(); ++u)
      for (int v = u + 1; v < g.n_vertices(); ++v)
        queries.push_back({{g.from_flat_id(u)}, {g.from_flat_id(v)}});
  }
  CumulantOptions options;
  options.eta = s.eta;
  options.k_max = s.k_max;
  options.limits = limits_of(s);
  std::vector<DecayRow> rows;
  try {
    rows = decay_experiment(g, real_lambda(s), queries, s.m.value_or(8), options);
  } catch (const CertificationError&) {
    throw Refusal("certification failed; try `exact`");
  }
  Sink sink(s, out);
  write_decay_csv(sink.get(), rows);
  return kExitOk;
}

int cmd_zeros(const Settings& s, std::ostream& out) {
  const BipartiteGraph g = load_graph_file(s.graph_path);
  ZeroProbeReport report;
  try {
    report = zero_probe(g, ComplexRegion{s.region_l, s.region_r}, s.samples, s.seed);
  } catch (const CertificationError& e) {
    throw Refusal(e.what());
  }
  const json doc = {{"samples", report.samples},
                    {"boundary_samples", report.boundary_samples},
                    {"min_abs_Z", report.min_abs_Z},
                    {"min_abs_Xi", report.min_abs_Xi},
                    {"zeros_found", report.zeros_found},
                    {"argmin",
                     {{"lambda_L", {report.argmin.lambda_L.real(), report.argmin.lambda_L.imag()}},
                      {"lambda_R", {report.argmin.lambda_R.real(), report.argmin.lambda_R.imag()}}}},
                    {"region_condition", inequality_json(report.region_condition)}};
  if (s.json_output) {
    out << doc.dump(2) << '\n';
  } else {
    out << "samples: " << report.samples << " (" << report.boundary_samples << " on the boundary)\n"
        << "min |Z| = " << report.min_abs_Z << '\n'
        << "min |Xi| = " << report.min_abs_Xi << '\n'
        << "zeros found: " << report.zeros_found << '\n';
  }
  return kExitOk;
}

int cmd_gen(const Settings& s, std::ostream& out) {
  FamilySpec spec;
  if (s.family == "complete_bipartite") {
    spec = family::CompleteBipartite{s.a, s.b};
  } else if (s.family == "star_center_L") {
    spec = family::StarCenterLeft{s.k};
  } else if (s.family == "star_center_R") {
    spec = family::StarCenterRight{s.k};
  } else if (s.family == "random_biregular") {
    spec = family::RandomBiregular{s.d_l, s.d_r, s.n_l, s.seed};
  } else if (s.family == "even_cycle") {
    spec = family::EvenCycle{s.length};
  } else if (s.family == "path") {
    spec = family::Path{s.n};
  } else {
    throw std::invalid_argument("unknown family '" + s.family + "'");
  }
  const BipartiteGraph g = generate(spec);
  Sink sink(s, out);
  sink.get() << to_edge_list(g);
  return kExitOk;
}

void add_lambda(CLI::App* cmd, Settings& s) {
  cmd->add_option("--lambda-l", s.lambda_l, "fugacity on L")->capture_default_str();
  cmd->add_option("--lambda-r", s.lambda_r, "fugacity on R")->capture_default_str();
}

void add_expansion(CLI::App* cmd, Settings& s) {
  cmd->add_option("--eta", s.eta, "decay rate for empirical certification")->capture_default_str();
  cmd->add_option("--k-max", s.k_max, "polymer size for per-vertex sums")->capture_default_str();
  cmd->add_option("--max-clusters", s.max_clusters, "cluster enumeration cap")->capture_default_str();
}

bool wants_json(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--json") return true;
  return false;
}

int report_error(std::ostream& out, std::ostream& err, bool json_output, const std::string& msg,
                 int code) {
  err << "error: " << msg << '\n';
  if (json_output) out << json{{"error", msg}, {"exit_code", code}}.dump() << '\n';
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Polymer-expansion counting and sampling for the bipartite hard-core model", "bihc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", s.json_output, "machine-readable output");
  app.add_option("--threads", s.threads, "worker threads (0: all cores)");

  auto* check = app.add_subcommand("check", "conditions and convergence certificate");
  check->add_option("graph", s.graph_path, "edge-list file")->required();
  add_lambda(check, s);
  add_expansion(check, s);

  auto* count = app.add_subcommand("count", "approximate log Z");
  count->add_option("graph", s.graph_path, "edge-list file")->required();
  add_lambda(count, s);
  add_expansion(count, s);
  count->add_option("--eps", s.eps, "target error (e^{-eps} Z <= estimate <= e^{eps} Z)")->capture_default_str();
  count->add_option("--m", s.m, "truncation order override");
  count->add_option("--out", s.out_path, "write the result here");
  count->add_option("--dump-clusters", s.dump_clusters, "write every cluster to this file");

  auto* exact = app.add_subcommand("exact", "exact Z, marginals and cumulants");
  exact->add_option("graph", s.graph_path, "edge-list file")->required();
  add_lambda(exact, s);
  exact->add_option("--lambda-l-re", s.lambda_l_re, "complex mode: Re lambda_L");
  exact->add_option("--lambda-l-im", s.lambda_l_im, "complex mode: Im lambda_L");
  exact->add_option("--lambda-r-re", s.lambda_r_re, "complex mode: Re lambda_R");
  exact->add_option("--lambda-r-im", s.lambda_r_im, "complex mode: Im lambda_R");
  exact->add_option("--set", s.sets, "vertex set such as L0,R2 (repeatable)");

  auto* sample = app.add_subcommand("sample", "draw independent sets");
  sample->add_option("graph", s.graph_path, "edge-list file")->required();
  add_lambda(sample, s);
  add_expansion(sample, s);
  sample->add_option("--eps", s.eps, "total-variation target")->capture_default_str();
  sample->add_option("--n", s.draws, "number of draws")->capture_default_str();
  sample->add_option("--seed", s.seed, "random seed")->capture_default_str();
  sample->add_option("--m", s.m, "cap on the per-step truncation order");
  sample->add_option("--backend", s.backend, "truncated or exact")->capture_default_str();
  sample->add_option("--out", s.out_path, "write samples here");

  auto* decay = app.add_subcommand("decay", "cumulant and correlation decay table (CSV)");
  decay->add_option("graph", s.graph_path, "edge-list file")->required();
  add_lambda(decay, s);
  add_expansion(decay, s);
  decay->add_option("--m", s.m, "truncation order for cumulants (default 8)");
  decay->add_option("--max-set", s.max_set, "largest cumulant set")->capture_default_str();
  decay->add_flag("--no-pairs", s.no_pairs, "skip vertex-pair correlations");
  decay->add_option("--out", s.out_path, "write the table here");

  auto* zeros = app.add_subcommand("zeros", "probe |Z| over a complex region");
  zeros->add_option("graph", s.graph_path, "edge-list file")->required();
  zeros->add_option("--region-l", s.region_l, "Lambda_L: |1 + lambda_L| >= 1 + Lambda_L")->capture_default_str();
  zeros->add_option("--region-r", s.region_r, "Lambda_R: |lambda_R| <= Lambda_R")->capture_default_str();
  zeros->add_option("--samples", s.samples, "number of points")->capture_default_str();
  zeros->add_option("--seed", s.seed, "random seed")->capture_default_str();

  auto* gen = app.add_subcommand("gen", "write a graph from a family");
  gen->add_option("--family", s.family,
                  "complete_bipartite | star_center_L | star_center_R | random_biregular | "
                  "even_cycle | path")
      ->required();
  gen->add_option("--k", s.k, "star size");
  gen->add_option("--a", s.a, "complete bipartite: |L|");
  gen->add_option("--b", s.b, "complete bipartite: |R|");
  gen->add_option("--d-l", s.d_l, "biregular: degree on L");
  gen->add_option("--d-r", s.d_r, "biregular: degree on R");
  gen->add_option("--n-l", s.n_l, "biregular: |L|");
  gen->add_option("--seed", s.seed, "biregular: seed");
  gen->add_option("--length", s.length, "cycle length");
  gen->add_option("--n", s.n, "path vertices");
  gen->add_option("--out", s.out_path, "write the graph here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report_error(out, err, wants_json(argc, argv), e.what(), kExitInput);
  }

  try {
    if (*check) return cmd_check(s, out);
    if (*count) return cmd_count(s, out, err);
    if (*exact) return cmd_exact(s, out, complex_mode(s));
    if (*sample) return cmd_sample(s, out);
    if (*decay) return cmd_decay(s, out);
    if (*zeros) return cmd_zeros(s, out);
    if (*gen) return cmd_gen(s, out);
  } catch (const Refusal& e) {
    return report_error(out, err, s.json_output, e.what(), kExitRefused);
  } catch (const std::exception& e) {
    return report_error(out, err, s.json_output, e.what(), kExitInput);
  }
  return kExitInput;
}

}  // namespace bihc::cli
