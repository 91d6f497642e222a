#include "steiner/instance.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace steiner {

std::vector<std::vector<AdjEntry>> build_adjacency(int node_count, const std::vector<Edge>& edges) {
    std::vector<std::vector<AdjEntry>> adj(static_cast<std::size_t>(node_count));
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        const Edge& e = edges[static_cast<std::size_t>(i)];
        adj[static_cast<std::size_t>(e.u)].push_back({e.v, e.w, i});
        adj[static_cast<std::size_t>(e.v)].push_back({e.u, e.w, i});
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end(), [](const AdjEntry& a, const AdjEntry& b) { return a.to < b.to; });
    }
    return adj;
}

bool is_connected(int node_count, const std::vector<Edge>& edges, const std::vector<NodeId>& active) {
    std::vector<NodeId> nodes = active;
    if (nodes.empty()) {
        nodes.resize(static_cast<std::size_t>(node_count));
        for (int i = 0; i < node_count; ++i) nodes[static_cast<std::size_t>(i)] = i;
    }
    if (nodes.empty()) return true;

    std::vector<std::uint8_t> in_set(static_cast<std::size_t>(node_count), 0);
    for (NodeId v : nodes) in_set[static_cast<std::size_t>(v)] = 1;

    std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(node_count));
    for (const Edge& e : edges) {
        if (in_set[static_cast<std::size_t>(e.u)] && in_set[static_cast<std::size_t>(e.v)]) {
            adj[static_cast<std::size_t>(e.u)].push_back(e.v);
            adj[static_cast<std::size_t>(e.v)].push_back(e.u);
        }
    }

    std::vector<std::uint8_t> seen(static_cast<std::size_t>(node_count), 0);
    std::queue<NodeId> queue;
    queue.push(nodes.front());
    seen[static_cast<std::size_t>(nodes.front())] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop();
        for (NodeId v : adj[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++reached;
                queue.push(v);
            }
        }
    }
    return reached == nodes.size();
}

std::vector<Edge> induced_edges(const std::vector<Edge>& edges, const std::vector<NodeId>& nodes, int node_count) {
    std::vector<std::uint8_t> in_set(static_cast<std::size_t>(node_count), 0);
    for (NodeId v : nodes) in_set[static_cast<std::size_t>(v)] = 1;
    std::vector<Edge> result;
    for (const Edge& e : edges) {
        if (in_set[static_cast<std::size_t>(e.u)] && in_set[static_cast<std::size_t>(e.v)]) result.push_back(e);
    }
    return result;
}

SteinerInstance SteinerInstance::create(int node_count, std::vector<Edge> edges,
                                        std::vector<NodeId> terminals,
                                        std::optional<std::vector<Point>> coords, std::string id) {
    if (node_count <= 0) throw InvalidInstance("node_count must be positive");

    for (Edge& e : edges) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= node_count) throw InvalidInstance("edge endpoint out of range");
        if (e.u == e.v) throw InvalidInstance("self-loop");
        if (e.w <= 0) throw InvalidInstance("non-positive edge weight");
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
            throw InvalidInstance("duplicate edge {" + std::to_string(edges[i].u) + "," + std::to_string(edges[i].v) + "}");
        }
    }

    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    if (terminals.empty()) throw InvalidInstance("empty terminal set");
    if (terminals.front() < 0 || terminals.back() >= node_count) throw InvalidInstance("terminal out of range");

    if (coords) {
        if (static_cast<int>(coords->size()) != node_count) throw InvalidInstance("coords size != node_count");
        for (const Point& p : *coords) {
            if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0) throw InvalidInstance("coordinate outside unit square");
        }
    }

    if (!is_connected(node_count, edges)) throw InvalidInstance("graph is not connected");

    SteinerInstance inst;
    inst.node_count_ = node_count;
    inst.edges_ = std::move(edges);
    inst.terminals_ = std::move(terminals);
    inst.coords_ = std::move(coords);
    inst.id_ = std::move(id);
    inst.adjacency_ = build_adjacency(inst.node_count_, inst.edges_);
    inst.terminal_flags_.assign(static_cast<std::size_t>(inst.node_count_), 0);
    for (NodeId t : inst.terminals_) inst.terminal_flags_[static_cast<std::size_t>(t)] = 1;
    return inst;
}

std::optional<Weight> SteinerInstance::edge_weight(NodeId a, NodeId b) const {
    if (a < 0 || b < 0 || a >= node_count_ || b >= node_count_ || a == b) return std::nullopt;
    const auto& list = adjacency_[static_cast<std::size_t>(a)];
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const AdjEntry& e, NodeId v) { return e.to < v; });
    if (it != list.end() && it->to == b) return it->w;
    return std::nullopt;
}

bool SteinerInstance::unweighted() const {
    return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.w == 1; });
}

std::vector<NodeId> SteinerTree::nodes() const {
    std::set<NodeId> seen;
    for (const Edge& e : edges) {
        seen.insert(e.u);
        seen.insert(e.v);
    }
    return {seen.begin(), seen.end()};
}

SteinerTree make_tree(const SteinerInstance& instance, std::vector<EdgeKey> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    SteinerTree tree;
    tree.edges.reserve(edges.size());
    for (const EdgeKey& k : edges) {
        auto w = instance.edge_weight(k.u, k.v);
        if (!w) throw GraphError("edge {" + std::to_string(k.u) + "," + std::to_string(k.v) + "} not in instance");
        tree.edges.push_back(Edge{std::min(k.u, k.v), std::max(k.u, k.v), *w});
        tree.cost += *w;
    }
    return tree;
}

}  // namespace steiner
