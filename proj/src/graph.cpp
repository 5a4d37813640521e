#include "rumor/graph.hpp"

#include <algorithm>
#include <string>

#include "rumor/error.hpp"

namespace rumor {

Graph::Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges)
    : adjacency_(n) {
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) {
      throw InvalidParameter("edge (" + std::to_string(a) + ", " +
                             std::to_string(b) + ") out of range for " +
                             std::to_string(n) + " nodes");
    }
    if (a == b) {
      throw InvalidParameter("self-loop on node " + std::to_string(a));
    }
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  std::size_t total = 0;
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    total += adj.size();
  }
  edge_count_ = total / 2;
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a >= adjacency_.size() || b >= adjacency_.size()) return false;
  return std::binary_search(adjacency_[a].begin(), adjacency_[a].end(), b);
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> out;
  out.reserve(adjacency_.size());
  for (const auto& adj : adjacency_) out.push_back(adj.size());
  return out;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (NodeId i = 0; i < adjacency_.size(); ++i) {
    for (NodeId j : adjacency_[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace rumor
