#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace steiner {

using NodeId = std::int32_t;
using Weight = std::int64_t;
using Cost = std::int64_t;

struct Edge {
    NodeId u;
    NodeId v;
    Weight w;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Normalizes to u < v.
inline Edge make_edge(NodeId a, NodeId b, Weight w) {
    return a < b ? Edge{a, b, w} : Edge{b, a, w};
}

struct EdgeKey {
    NodeId u;
    NodeId v;

    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

inline EdgeKey make_edge_key(NodeId a, NodeId b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

struct AdjEntry {
    NodeId to;
    Weight w;
    int edge_index;
};

// Adjacency lists sorted by neighbor id, built once from an edge list.
std::vector<std::vector<AdjEntry>> build_adjacency(int node_count, const std::vector<Edge>& edges);

// Connectivity of (a subset of) the nodes under the given edges.  `active`
// may be empty, meaning all nodes 0..node_count-1 are considered.
bool is_connected(int node_count, const std::vector<Edge>& edges, const std::vector<NodeId>& active = {});

// Edges of `edges` with both endpoints inside `nodes`.
std::vector<Edge> induced_edges(const std::vector<Edge>& edges, const std::vector<NodeId>& nodes, int node_count);

class GraphError : public std::runtime_error {
public:
    explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace steiner
