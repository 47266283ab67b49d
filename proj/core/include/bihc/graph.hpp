#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace bihc {

enum class Side : std::uint8_t { Left, Right };

/// A vertex addressed by side and dense per-side index, so left and right
/// indices never collide.
struct Vertex {
  Side side = Side::Left;
  int index = 0;

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

inline Vertex left(int i) { return {Side::Left, i}; }
inline Vertex right(int i) { return {Side::Right, i}; }

using VertexSet = std::vector<Vertex>;

/// Sentinel returned by distance and Steiner queries across components.
inline constexpr int kInfinity = std::numeric_limits<int>::max();

/// Bipartite graph with bipartition (L, R). Edges are stored in insertion
/// order; adjacency lists are sorted. Immutable after construction.
class BipartiteGraph {
 public:
  using Edge = std::pair<int, int>;  // (left index, right index)

  BipartiteGraph() = default;

  /// Throws std::invalid_argument on out-of-range indices or duplicate edges.
  BipartiteGraph(int n_left, int n_right, std::vector<Edge> edges);

  int n_left() const { return n_left_; }
  int n_right() const { return n_right_; }
  int n_vertices() const { return n_left_ + n_right_; }
  std::size_t n_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const int> neighbors_of_left(int u) const { return left_adj_[u]; }
  std::span<const int> neighbors_of_right(int v) const { return right_adj_[v]; }
  std::span<const int> neighbors(Vertex x) const {
    return x.side == Side::Left ? neighbors_of_left(x.index) : neighbors_of_right(x.index);
  }
  int degree(Vertex x) const { return static_cast<int>(neighbors(x).size()); }
  bool has_edge(int u, int v) const;
  bool contains(Vertex x) const {
    return x.index >= 0 && x.index < (x.side == Side::Left ? n_left_ : n_right_);
  }

  /// Flat id: left vertices occupy [0, n_L), right vertices [n_L, n_L + n_R).
  int flat_id(Vertex x) const { return x.side == Side::Left ? x.index : n_left_ + x.index; }
  Vertex from_flat_id(int id) const { return id < n_left_ ? left(id) : right(id - n_left_); }

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.n_left_ == b.n_left_ && a.n_right_ == b.n_right_ && a.edges_ == b.edges_;
  }

 private:
  int n_left_ = 0;
  int n_right_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> left_adj_;
  std::vector<std::vector<int>> right_adj_;
};

struct DegreeProfile {
  int delta_L_max = 0;
  int delta_L_min = 0;
  int delta_R_min = 0;
  int delta_R_max = 0;

  /// Membership in the class G(Delta_L, delta_R, Delta_R).
  bool in_class(int Delta_L, int delta_R, int Delta_R) const {
    return delta_L_max <= Delta_L && delta_R_min >= delta_R && delta_R_max <= Delta_R;
  }

  friend bool operator==(const DegreeProfile&, const DegreeProfile&) = default;
};

/// Parses the edge-list format: a header "n_L n_R" followed by "u v" lines.
/// '#' starts a comment. Errors carry the offending 1-based line number.
BipartiteGraph load_graph(std::string_view text);
BipartiteGraph load_graph_file(const std::string& path);

/// Canonical serialization; load_graph(to_edge_list(g)) == g.
std::string to_edge_list(const BipartiteGraph& g);

/// Throws std::invalid_argument if either side is empty.
DegreeProfile degree_profile(const BipartiteGraph& g);

/// BFS distances from a set of sources, indexed by flat id; kInfinity where unreachable.
std::vector<int> distances_from(const BipartiteGraph& g, std::span<const Vertex> sources);

/// min over a in A, b in B of the shortest-path length; kInfinity if disconnected.
int graph_distance(const BipartiteGraph& g, std::span<const Vertex> a, std::span<const Vertex> b);

inline constexpr int kMaxSteinerTerminals = 8;

/// Edge count of a minimum Steiner tree spanning `terminals` (Dreyfus-Wagner).
/// kInfinity when the terminals span more than one component.
int steiner_tree_size(const BipartiteGraph& g, std::span<const Vertex> terminals);

/// Connected component label per flat id.
std::vector<int> component_labels(const BipartiteGraph& g);

// Graph families.
namespace family {
struct CompleteBipartite { int a = 1, b = 1; };
struct StarCenterLeft { int k = 1; };
struct StarCenterRight { int k = 1; };
struct RandomBiregular { int d_L = 1, d_R = 1, n_L = 1; std::uint64_t seed = 0; };
struct EvenCycle { int length = 4; };
struct Path { int n = 2; };
}  // namespace family

using FamilySpec = std::variant<family::CompleteBipartite, family::StarCenterLeft,
                                family::StarCenterRight, family::RandomBiregular,
                                family::EvenCycle, family::Path>;

/// Deterministic given the spec (including the seed for random families).
BipartiteGraph generate(const FamilySpec& spec);

BipartiteGraph complete_bipartite(int a, int b);
BipartiteGraph star_center_left(int k);
BipartiteGraph star_center_right(int k);
BipartiteGraph random_biregular(int d_L, int d_R, int n_L, std::uint64_t seed);
BipartiteGraph even_cycle(int length);
BipartiteGraph path_graph(int n);

/// Disjoint union; the right graph's indices are shifted past the left graph's.
BipartiteGraph disjoint_union(const BipartiteGraph& a, const BipartiteGraph& b);

bool is_independent(const BipartiteGraph& g, std::span<const Vertex> set);

}  // namespace bihc
