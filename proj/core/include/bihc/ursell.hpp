#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/rational.hpp>

namespace bihc {

using Rational = boost::rational<std::int64_t>;

/// Simple undirected graph on at most 32 vertices, adjacency as bit rows.
class SmallGraph {
 public:
  explicit SmallGraph(int n = 0);

  int n() const { return n_; }
  void add_edge(int a, int b);
  bool adjacent(int a, int b) const { return (rows_[a] >> b) & 1u; }
  std::uint32_t row(int a) const { return rows_[a]; }
  std::vector<std::pair<int, int>> edges() const;
  bool connected() const;

  static SmallGraph complete(int n);
  static SmallGraph cycle(int n);

 private:
  int n_;
  std::vector<std::uint32_t> rows_;
};

inline constexpr int kMaxUrsellVertices = 12;
inline constexpr int kMaxClusterSlots = 20;

/// n! for 0 <= n <= 20.
std::int64_t factorial(int n);

/// sum over spanning connected edge subsets A of (-1)^{|A|}, by direct
/// enumeration of edge subsets. Exponential in |E|.
std::int64_t signed_connected_sum_edge_subsets(const SmallGraph& h);

/// Same quantity by deletion-contraction on parallel-edge bundles.
std::int64_t signed_connected_sum_deletion_contraction(const SmallGraph& h);

Rational ursell_edge_subsets(const SmallGraph& h);
Rational ursell_deletion_contraction(const SmallGraph& h);

/// phi(H) = (1/|V|!) sum_{A spanning connected} (-1)^{|A|}. Edge-subset
/// enumeration up to 6 vertices, deletion-contraction beyond. Throws
/// std::invalid_argument for disconnected H or more than 12 vertices.
Rational ursell(const SmallGraph& h);

/// Signed connected sums for every multiset over a fixed support of distinct
/// polymers. `adjacency[i]` has bit j set when distinct polymers i and j are
/// incompatible; copies of one polymer are always mutually incompatible.
/// Entries are indexed by multiplicity vectors a with 0 <= a_i <= max_mult[i]
/// in mixed radix; vectors whose size sum_i a_i * sizes[i] exceeds `budget`
/// are skipped and read as 0.
class SignedSumTable {
 public:
  SignedSumTable(std::span<const std::uint32_t> adjacency, std::span<const int> max_mult,
                 std::span<const int> sizes, int budget);

  std::int64_t at(std::span<const int> multiplicities) const;

 private:
  std::vector<std::int64_t> stride_;
  std::vector<std::int64_t> values_;
};

/// Signed connected sum of the multiset with the given multiplicities
/// (all of them >= 1, at most 20 slots in total).
std::int64_t cluster_signed_sum(std::span<const std::uint32_t> adjacency,
                                std::span<const int> multiplicities);

}  // namespace bihc
