#pragma once

#include "steiner/graph.hpp"

namespace steiner {

// Kruskal over the given nodes. Candidate edges are taken in
// (weight, min endpoint, max endpoint) order, so the result is deterministic
// even with ties. Throws GraphError if the edges do not connect the nodes.
std::vector<Edge> minimum_spanning_tree(const std::vector<NodeId>& nodes, std::vector<Edge> edges);

inline Cost total_weight(const std::vector<Edge>& edges) {
    Cost c = 0;
    for (const Edge& e : edges) c += e.w;
    return c;
}

}  // namespace steiner
