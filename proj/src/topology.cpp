#include "blemesh/topology.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace blemesh {

std::vector<NodeSpec> generate_paper_topology(const PaperTopologyOptions& o) {
  std::vector<NodeSpec> nodes;
  double span_x = 4.0 * o.grid_spacing_m;
  // Head on the central-floor ceiling, horizontally centered.
  nodes.push_back({1,
                   {span_x / 2.0 + o.head_x_offset_m,
                    o.row_spacing_m / 2.0 + o.head_y_offset_m,
                    o.floor_height_m * 2.0},
                   NodeRole::Head});
  int id = 2;
  for (int floor = 0; floor < 3; ++floor) {
    for (int row = 0; row < 2; ++row) {
      for (int col = 0; col < 5; ++col) {
        nodes.push_back({id++,
                         {o.grid_spacing_m * col, o.row_spacing_m * row,
                          o.floor_height_m * floor + o.node_height_m},
                         NodeRole::BleNode});
      }
    }
  }
  return nodes;
}

std::vector<NodeSpec> generate_chain_topology(const ChainTopologyOptions& o) {
  std::vector<NodeSpec> nodes;
  double mid_y = (o.chains - 1) * o.lane_spacing_m / 2.0;
  nodes.push_back({1, {0.0, mid_y, 1.2}, NodeRole::Head});
  int id = 2;
  for (int level = 1; level <= o.levels; ++level) {
    for (int lane = 0; lane < o.chains; ++lane) {
      nodes.push_back({id++,
                       {o.level_spacing_m * level, o.lane_spacing_m * lane, 1.2},
                       NodeRole::BleNode});
    }
  }
  nodes.push_back(
      {id, {o.level_spacing_m * (o.levels + 1), mid_y, 1.2}, NodeRole::BleNode});
  return nodes;
}

std::map<int, std::vector<int>> connectivity_graph(
    const std::vector<NodeSpec>& nodes, const ChannelParams& params) {
  std::map<int, std::vector<int>> adj;
  for (const auto& n : nodes) adj[n.id] = {};
  for (size_t i = 0; i < nodes.size(); ++i) {
    for (size_t j = i + 1; j < nodes.size(); ++j) {
      if (is_neighbor(nodes[i].position, nodes[j].position, params)) {
        adj[nodes[i].id].push_back(nodes[j].id);
        adj[nodes[j].id].push_back(nodes[i].id);
      }
    }
  }
  for (auto& [id, list] : adj) std::sort(list.begin(), list.end());
  return adj;
}

std::map<int, int> bfs_hops(const std::vector<NodeSpec>& nodes,
                            const std::map<int, std::vector<int>>& graph) {
  std::map<int, int> dist;
  std::deque<int> queue;
  for (const auto& n : nodes) {
    if (n.role == NodeRole::Head) {
      dist[n.id] = 0;
      queue.push_back(n.id);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : graph.at(u)) {
      if (!dist.contains(v)) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

void validate_topology(const std::vector<NodeSpec>& nodes) {
  std::set<int> ids;
  bool head = false;
  for (const auto& n : nodes) {
    if (!ids.insert(n.id).second) {
      throw std::runtime_error("duplicate node id " + std::to_string(n.id));
    }
    if (n.role == NodeRole::Head) head = true;
    if (!std::isfinite(n.position.x) || !std::isfinite(n.position.y) ||
        !std::isfinite(n.position.z)) {
      throw std::runtime_error("non-finite position for node " +
                               std::to_string(n.id));
    }
  }
  if (nodes.empty()) throw std::runtime_error("empty topology");
  if (!head) throw std::runtime_error("topology has no head node");
}

}  // namespace blemesh
