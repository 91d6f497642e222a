#pragma once

#include "steiner/instance.hpp"

namespace steiner {

struct ShortestPaths {
    std::vector<Cost> dist;
    std::vector<NodeId> parent;  // -1 at the source

    // Node sequence source..target along one shortest path.
    std::vector<NodeId> path_to(NodeId target) const;
};

// Dijkstra from `source`. Among equal-length paths the predecessor with the
// smallest id wins, so witness paths are deterministic.
ShortestPaths shortest_paths(const SteinerInstance& instance, NodeId source);

}  // namespace steiner
