#include "bihc/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bihc/errors.hpp"

namespace bihc {

BipartiteGraph::BipartiteGraph(int n_left, int n_right, std::vector<Edge> edges)
    : n_left_(n_left), n_right_(n_right), edges_(std::move(edges)) {
  if (n_left_ < 0 || n_right_ < 0) throw std::invalid_argument("negative side size");
  left_adj_.assign(n_left_, {});
  right_adj_.assign(n_right_, {});
  for (const auto& [u, v] : edges_) {
    if (u < 0 || u >= n_left_ || v < 0 || v >= n_right_) {
      throw std::invalid_argument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") out of range");
    }
    left_adj_[u].push_back(v);
    right_adj_[v].push_back(u);
  }
  for (auto& adj : left_adj_) {
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw std::invalid_argument("duplicate edge");
    }
  }
  for (auto& adj : right_adj_) std::sort(adj.begin(), adj.end());
}

bool BipartiteGraph::has_edge(int u, int v) const {
  const auto& adj = left_adj_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

int parse_int(std::string_view tok, std::size_t line_no) {
  int value = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line_no, "expected an integer, got '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

BipartiteGraph load_graph(std::string_view text) {
  bool have_header = false;
  int n_left = 0;
  int n_right = 0;
  std::vector<BipartiteGraph::Edge> edges;
  std::set<BipartiteGraph::Edge> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw ParseError(line_no, "expected two integers, got " + std::to_string(tokens.size()) +
                                    " tokens");
    }
    const int a = parse_int(tokens[0], line_no);
    const int b = parse_int(tokens[1], line_no);
    if (!have_header) {
      if (a < 0 || b < 0) throw ParseError(line_no, "side sizes must be nonnegative");
      n_left = a;
      n_right = b;
      have_header = true;
      continue;
    }
    if (a < 0 || a >= n_left) {
      throw ParseError(line_no, "left index " + std::to_string(a) + " out of range [0, " +
                                    std::to_string(n_left) + ")");
    }
    if (b < 0 || b >= n_right) {
      throw ParseError(line_no, "right index " + std::to_string(b) + " out of range [0, " +
                                    std::to_string(n_right) + ")");
    }
    if (!seen.insert({a, b}).second) {
      throw ParseError(line_no, "duplicate edge " + std::to_string(a) + " " + std::to_string(b));
    }
    edges.emplace_back(a, b);
  }
  if (!have_header) throw ParseError(line_no, "missing header line \"n_L n_R\"");
  return BipartiteGraph(n_left, n_right, std::move(edges));
}

BipartiteGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str());
}

std::string to_edge_list(const BipartiteGraph& g) {
  std::string out = std::to_string(g.n_left()) + " " + std::to_string(g.n_right()) + "\n";
  for (const auto& [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

DegreeProfile degree_profile(const BipartiteGraph& g) {
  if (g.n_left() == 0 || g.n_right() == 0) {
    throw std::invalid_argument("degree profile of a graph with an empty side");
  }
  DegreeProfile p;
  p.delta_L_min = kInfinity;
  p.delta_R_min = kInfinity;
  for (int u = 0; u < g.n_left(); ++u) {
    const int d = g.degree(left(u));
    p.delta_L_max = std::max(p.delta_L_max, d);
    p.delta_L_min = std::min(p.delta_L_min, d);
  }
  for (int v = 0; v < g.n_right(); ++v) {
    const int d = g.degree(right(v));
    p.delta_R_max = std::max(p.delta_R_max, d);
    p.delta_R_min = std::min(p.delta_R_min, d);
  }
  return p;
}

std::vector<int> distances_from(const BipartiteGraph& g, std::span<const Vertex> sources) {
  std::vector<int> dist(g.n_vertices(), kInfinity);
  std::queue<int> queue;
  for (const Vertex& s : sources) {
    if (!g.contains(s)) throw std::invalid_argument("vertex out of range");
    const int id = g.flat_id(s);
    if (dist[id] != 0) {
      dist[id] = 0;
      queue.push(id);
    }
  }
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop();
    for (int nb : g.neighbors(g.from_flat_id(id))) {
      const Side other = id < g.n_left() ? Side::Right : Side::Left;
      const int nid = g.flat_id({other, nb});
      if (dist[nid] == kInfinity) {
        dist[nid] = dist[id] + 1;
        queue.push(nid);
      }
    }
  }
  return dist;
}

int graph_distance(const BipartiteGraph& g, std::span<const Vertex> a, std::span<const Vertex> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("graph_distance of an empty set");
  const auto dist = distances_from(g, a);
  int best = kInfinity;
  for (const Vertex& x : b) {
    if (!g.contains(x)) throw std::invalid_argument("vertex out of range");
    best = std::min(best, dist[g.flat_id(x)]);
  }
  return best;
}

std::vector<int> component_labels(const BipartiteGraph& g) {
  std::vector<int> label(g.n_vertices(), -1);
  int next = 0;
  for (int id = 0; id < g.n_vertices(); ++id) {
    if (label[id] >= 0) continue;
    const Vertex root = g.from_flat_id(id);
    const auto dist = distances_from(g, std::span(&root, 1));
    for (int j = 0; j < g.n_vertices(); ++j) {
      if (dist[j] != kInfinity) label[j] = next;
    }
    ++next;
  }
  return label;
}

int steiner_tree_size(const BipartiteGraph& g, std::span<const Vertex> terminals_in) {
  std::vector<Vertex> terminals(terminals_in.begin(), terminals_in.end());
  std::sort(terminals.begin(), terminals.end());
  terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
  if (terminals.empty()) throw std::invalid_argument("steiner_tree_size of an empty set");
  if (terminals.size() > static_cast<std::size_t>(kMaxSteinerTerminals)) {
    throw std::invalid_argument("steiner_tree_size supports at most 8 terminals");
  }
  if (terminals.size() == 1) {
    if (!g.contains(terminals[0])) throw std::invalid_argument("vertex out of range");
    return 0;
  }

  const int n = g.n_vertices();
  const int k = static_cast<int>(terminals.size());
  const int full = (1 << k) - 1;
  std::vector<std::vector<int>> dp(full + 1, std::vector<int>(n, kInfinity));

  for (int i = 0; i < k; ++i) {
    dp[1 << i] = distances_from(g, std::span(&terminals[i], 1));
    if (dp[1 << i][g.flat_id(terminals[0])] == kInfinity) return kInfinity;
  }

  const auto add = [](int a, int b) { return (a == kInfinity || b == kInfinity) ? kInfinity : a + b; };

  using Item = std::pair<int, int>;  // (cost, flat id)
  for (int set = 1; set <= full; ++set) {
    if ((set & (set - 1)) == 0) continue;
    auto& row = dp[set];
    // Split at a vertex: both halves meet there. Fix the lowest terminal in `sub`.
    const int low = set & -set;
    for (int sub = (set - 1) & set; sub > 0; sub = (sub - 1) & set) {
      if ((sub & low) == 0) continue;
      const auto& a = dp[sub];
      const auto& b = dp[set ^ sub];
      for (int v = 0; v < n; ++v) row[v] = std::min(row[v], add(a[v], b[v]));
    }
    // Grow along unit-weight edges.
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int v = 0; v < n; ++v) {
      if (row[v] != kInfinity) heap.emplace(row[v], v);
    }
    while (!heap.empty()) {
      auto [cost, id] = heap.top();
      heap.pop();
      if (cost != row[id]) continue;
      const Side other = id < g.n_left() ? Side::Right : Side::Left;
      for (int nb : g.neighbors(g.from_flat_id(id))) {
        const int nid = g.flat_id({other, nb});
        if (cost + 1 < row[nid]) {
          row[nid] = cost + 1;
          heap.emplace(cost + 1, nid);
        }
      }
    }
  }
  return *std::min_element(dp[full].begin(), dp[full].end());
}

BipartiteGraph complete_bipartite(int a, int b) {
  if (a < 1 || b < 1) throw std::invalid_argument("complete_bipartite needs a, b >= 1");
  std::vector<BipartiteGraph::Edge> edges;
  for (int u = 0; u < a; ++u)
    for (int v = 0; v < b; ++v) edges.emplace_back(u, v);
  return BipartiteGraph(a, b, std::move(edges));
}

BipartiteGraph star_center_left(int k) {
  if (k < 1) throw std::invalid_argument("star needs k >= 1");
  return complete_bipartite(1, k);
}

BipartiteGraph star_center_right(int k) {
  if (k < 1) throw std::invalid_argument("star needs k >= 1");
  return complete_bipartite(k, 1);
}

BipartiteGraph random_biregular(int d_L, int d_R, int n_L, std::uint64_t seed) {
  if (d_L < 1 || d_R < 1 || n_L < 1) {
    throw std::invalid_argument("random_biregular needs positive degrees and n_L");
  }
  if ((static_cast<long long>(d_L) * n_L) % d_R != 0) {
    throw std::invalid_argument("random_biregular: d_L * n_L must be divisible by d_R");
  }
  const int n_R = static_cast<int>(static_cast<long long>(d_L) * n_L / d_R);
  if (d_L > n_R || d_R > n_L) {
    throw std::invalid_argument("random_biregular: degree exceeds the opposite side size");
  }

  // Circulant start: left u takes the d_L consecutive slots u*d_L, ... (mod n_R).
  // Consecutive slots cover every residue exactly d_R times.
  std::vector<BipartiteGraph::Edge> edges;
  std::set<BipartiteGraph::Edge> present;
  for (int u = 0; u < n_L; ++u) {
    for (int j = 0; j < d_L; ++j) {
      const int v = static_cast<int>((static_cast<long long>(u) * d_L + j) % n_R);
      edges.emplace_back(u, v);
      present.insert({u, v});
    }
  }

  // Degree-preserving double-edge swaps.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  const std::size_t swaps = 20 * edges.size();
  for (std::size_t s = 0; s < swaps; ++s) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (a == c || b == d) continue;
    if (present.count({a, d}) || present.count({c, b})) continue;
    present.erase({a, b});
    present.erase({c, d});
    present.insert({a, d});
    present.insert({c, b});
    edges[i] = {a, d};
    edges[j] = {c, b};
  }
  std::sort(edges.begin(), edges.end());
  return BipartiteGraph(n_L, n_R, std::move(edges));
}

BipartiteGraph even_cycle(int length) {
  if (length < 4 || length % 2 != 0) {
    throw std::invalid_argument("even_cycle needs an even length >= 4");
  }
  const int k = length / 2;
  // Cycle L0 R0 L1 R1 ... L(k-1) R(k-1) L0.
  std::vector<BipartiteGraph::Edge> edges;
  for (int i = 0; i < k; ++i) {
    edges.emplace_back(i, i);
    edges.emplace_back((i + 1) % k, i);
  }
  std::sort(edges.begin(), edges.end());
  return BipartiteGraph(k, k, std::move(edges));
}

BipartiteGraph path_graph(int n) {
  if (n < 2) throw std::invalid_argument("path needs n >= 2");
  // Positions alternate L, R, L, ...; position p has index p / 2 on its side.
  const int n_left = (n + 1) / 2;
  const int n_right = n / 2;
  std::vector<BipartiteGraph::Edge> edges;
  for (int p = 0; p + 1 < n; ++p) {
    const int l = (p % 2 == 0) ? p / 2 : (p + 1) / 2;
    const int r = p / 2;
    edges.emplace_back(l, r);
  }
  return BipartiteGraph(n_left, n_right, std::move(edges));
}

BipartiteGraph generate(const FamilySpec& spec) {
  return std::visit(
      [](const auto& s) -> BipartiteGraph {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, family::CompleteBipartite>) {
          return complete_bipartite(s.a, s.b);
        } else if constexpr (std::is_same_v<T, family::StarCenterLeft>) {
          return star_center_left(s.k);
        } else if constexpr (std::is_same_v<T, family::StarCenterRight>) {
          return star_center_right(s.k);
        } else if constexpr (std::is_same_v<T, family::RandomBiregular>) {
          return random_biregular(s.d_L, s.d_R, s.n_L, s.seed);
        } else if constexpr (std::is_same_v<T, family::EvenCycle>) {
          return even_cycle(s.length);
        } else {
          return path_graph(s.n);
        }
      },
      spec);
}

BipartiteGraph disjoint_union(const BipartiteGraph& a, const BipartiteGraph& b) {
  std::vector<BipartiteGraph::Edge> edges = a.edges();
  for (const auto& [u, v] : b.edges()) edges.emplace_back(u + a.n_left(), v + a.n_right());
  return BipartiteGraph(a.n_left() + b.n_left(), a.n_right() + b.n_right(), std::move(edges));
}

bool is_independent(const BipartiteGraph& g, std::span<const Vertex> set) {
  for (const Vertex& x : set) {
    if (x.side != Side::Left) continue;
    for (const Vertex& y : set) {
      if (y.side == Side::Right && g.has_edge(x.index, y.index)) return false;
    }
  }
  return true;
}

}  // namespace bihc
