#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "steiner/graph.hpp"

namespace steiner {

struct Point {
    double x;
    double y;

    friend bool operator==(const Point&, const Point&) = default;
};

// A Steiner tree instance: connected weighted graph plus terminal set.
// Immutable after construction; construction validates all invariants
// (ids in range, no self loops or duplicate edges, positive weights,
// connectivity, nonempty terminal set).
class SteinerInstance {
public:
    static SteinerInstance create(int node_count,
                                  std::vector<Edge> edges,
                                  std::vector<NodeId> terminals,
                                  std::optional<std::vector<Point>> coords = std::nullopt,
                                  std::string id = {});

    int node_count() const { return node_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<NodeId>& terminals() const { return terminals_; }
    const std::optional<std::vector<Point>>& coords() const { return coords_; }
    const std::string& id() const { return id_; }

    const std::vector<std::vector<AdjEntry>>& adjacency() const { return adjacency_; }
    bool is_terminal(NodeId v) const { return terminal_flags_[static_cast<std::size_t>(v)] != 0; }
    int terminal_count() const { return static_cast<int>(terminals_.size()); }

    // Weight of edge {a, b}, or nullopt if the instance has no such edge.
    std::optional<Weight> edge_weight(NodeId a, NodeId b) const;

    bool unweighted() const;

    friend bool operator==(const SteinerInstance& a, const SteinerInstance& b) {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_ &&
               a.terminals_ == b.terminals_ && a.coords_ == b.coords_ && a.id_ == b.id_;
    }

private:
    SteinerInstance() = default;

    int node_count_ = 0;
    std::vector<Edge> edges_;               // sorted by (u, v), u < v
    std::vector<NodeId> terminals_;         // sorted
    std::optional<std::vector<Point>> coords_;
    std::string id_;
    std::vector<std::vector<AdjEntry>> adjacency_;
    std::vector<std::uint8_t> terminal_flags_;
};

// A solution: a tree (edge set) spanning the instance's terminals.
struct SteinerTree {
    std::vector<Edge> edges;  // sorted by (u, v), u < v
    Cost cost = 0;

    // Nodes touched by at least one tree edge.
    std::vector<NodeId> nodes() const;
};

// Builds a SteinerTree from instance edges, recomputing the exact cost.
// Throws GraphError if some edge is not an instance edge.
SteinerTree make_tree(const SteinerInstance& instance, std::vector<EdgeKey> edges);

class InvalidInstance : public GraphError {
public:
    explicit InvalidInstance(const std::string& what) : GraphError(what) {}
};

}  // namespace steiner
