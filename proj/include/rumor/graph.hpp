#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rumor {

using NodeId = std::uint32_t;

/// Undirected, unweighted simple graph stored as sorted adjacency lists.
///
/// Immutable once built. Construction from an edge list rejects self-loops
/// and removes duplicates, so symmetry and simplicity always hold.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `n` nodes. Throws InvalidParameter on self-loops or
  /// out-of-range endpoints. Duplicate edges are collapsed.
  Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  bool has_edge(NodeId a, NodeId b) const;

  std::vector<std::size_t> degrees() const;

  /// Edges as (i, j) with i < j, lexicographically ordered.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

}  // namespace rumor
