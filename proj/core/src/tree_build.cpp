#include "steiner/tree_build.hpp"

#include <algorithm>
#include <set>

#include "steiner/metric_closure.hpp"
#include "steiner/mst.hpp"
#include "steiner/validate.hpp"

namespace steiner {

namespace {

std::vector<char> selection_flags(const SteinerInstance& instance,
                                  const std::vector<NodeId>& selected) {
    std::vector<char> flags(static_cast<std::size_t>(instance.node_count()), 0);
    for (const NodeId t : instance.terminals()) flags[static_cast<std::size_t>(t)] = 1;
    for (const NodeId v : selected) {
        if (v < 0 || v >= instance.node_count()) throw GraphError("selected node out of range");
        flags[static_cast<std::size_t>(v)] = 1;
    }
    return flags;
}

std::vector<NodeId> flagged_nodes(const std::vector<char>& flags) {
    std::vector<NodeId> nodes;
    for (std::size_t v = 0; v < flags.size(); ++v) {
        if (flags[v]) nodes.push_back(static_cast<NodeId>(v));
    }
    return nodes;
}

SteinerTree tree_from_edges(const SteinerInstance& instance, const std::vector<Edge>& edges) {
    std::vector<EdgeKey> keys;
    keys.reserve(edges.size());
    for (const auto& e : edges) keys.push_back(make_edge_key(e.u, e.v));
    return prune_tree(instance, make_tree(instance, keys));
}

}  // namespace

SteinerTree build_mst_heuristic(const SteinerInstance& instance,
                                const std::vector<NodeId>& selected,
                                const std::vector<NodeId>& extension_order) {
    auto flags = selection_flags(instance, selected);

    std::size_t next = 0;
    auto nodes = flagged_nodes(flags);
    while (!is_connected(instance.node_count(), instance.edges(), nodes)) {
        while (next < extension_order.size() &&
               flags[static_cast<std::size_t>(extension_order[next])]) {
            ++next;
        }
        if (next >= extension_order.size()) {
            throw GraphError("selection does not induce a connected subgraph");
        }
        flags[static_cast<std::size_t>(extension_order[next])] = 1;
        nodes = flagged_nodes(flags);
    }

    const auto mst = minimum_spanning_tree(
        nodes, induced_edges(instance.edges(), nodes, instance.node_count()));
    return tree_from_edges(instance, mst);
}

SteinerTree build_metric_closure_heuristic(const SteinerInstance& instance,
                                           const std::vector<NodeId>& selected) {
    const auto flags = selection_flags(instance, selected);
    const auto nodes = flagged_nodes(flags);
    if (nodes.size() == 1) return SteinerTree{{}, 0};

    const MetricClosure closure = metric_closure_over(instance, nodes);
    std::vector<Edge> closure_edges;
    for (int i = 0; i < closure.size(); ++i) {
        for (int j = i + 1; j < closure.size(); ++j) {
            closure_edges.push_back(make_edge(closure.nodes[static_cast<std::size_t>(i)],
                                              closure.nodes[static_cast<std::size_t>(j)],
                                              closure.dist[static_cast<std::size_t>(i)]
                                                          [static_cast<std::size_t>(j)]));
        }
    }
    const auto closure_mst = minimum_spanning_tree(closure.nodes, closure_edges);

    std::vector<int> position(static_cast<std::size_t>(instance.node_count()), -1);
    for (int i = 0; i < closure.size(); ++i) {
        position[static_cast<std::size_t>(closure.nodes[static_cast<std::size_t>(i)])] = i;
    }
    std::set<EdgeKey> expanded;
    std::set<NodeId> touched;
    for (const auto& e : closure_mst) {
        const auto& path = closure.witness_paths[static_cast<std::size_t>(
            position[static_cast<std::size_t>(e.u)])][static_cast<std::size_t>(
            position[static_cast<std::size_t>(e.v)])];
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            expanded.insert(make_edge_key(path[s], path[s + 1]));
        }
        for (const NodeId v : path) touched.insert(v);
    }

    // Witness paths can share segments and close cycles; re-span before
    // pruning.
    std::vector<Edge> subgraph;
    for (const auto& key : expanded) {
        subgraph.push_back(make_edge(key.u, key.v, *instance.edge_weight(key.u, key.v)));
    }
    const auto spanning =
        minimum_spanning_tree({touched.begin(), touched.end()}, subgraph);
    return tree_from_edges(instance, spanning);
}

}  // namespace steiner
