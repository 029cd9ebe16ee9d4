#pragma once

#include <map>
#include <string>
#include <vector>

#include "blemesh/channel.hpp"

namespace blemesh {

enum class NodeRole { Head, BleNode };

struct NodeSpec {
  int id = 0;
  Position position;
  NodeRole role = NodeRole::BleNode;
};

struct PaperTopologyOptions {
  double grid_spacing_m = 12.0;   // between consecutive neighbors in a line
  double row_spacing_m = 12.0;    // between the two lines of a floor
  double floor_height_m = 4.0;
  double node_height_m = 1.2;     // above each floor
  double head_x_offset_m = 0.0;   // from the horizontal grid center
  double head_y_offset_m = 0.0;
};

/// The 31-node 3-floor deployment: node 1 is the head on the central-floor
/// ceiling, nodes 2-31 sit in three 2x5 grids.
std::vector<NodeSpec> generate_paper_topology(
    const PaperTopologyOptions& opts = {});

struct ChainTopologyOptions {
  int chains = 5;        // parallel node-disjoint chains
  int levels = 4;        // intermediate levels between head and source
  double level_spacing_m = 15.0;
  double lane_spacing_m = 2.0;  // spread inside a level cluster
};

/// Failure-study deployment: head (id 1) - `levels` clustered levels of
/// `chains` nodes - a single source at hop levels+1. Every level node is a
/// neighbor of the whole adjacent levels, giving `chains` disjoint
/// minimum-hop paths from the source.
std::vector<NodeSpec> generate_chain_topology(
    const ChainTopologyOptions& opts = {});

/// Undirected connectivity graph from the is_neighbor rule; adjacency lists
/// are sorted by node id.
std::map<int, std::vector<int>> connectivity_graph(
    const std::vector<NodeSpec>& nodes, const ChannelParams& params);

/// BFS hop distance from the nearest head; unreachable nodes are absent.
std::map<int, int> bfs_hops(const std::vector<NodeSpec>& nodes,
                            const std::map<int, std::vector<int>>& graph);

/// Validates ids unique and at least one head; throws std::runtime_error.
void validate_topology(const std::vector<NodeSpec>& nodes);

}  // namespace blemesh
