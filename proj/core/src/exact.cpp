#include "steiner/exact.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "steiner/metric_closure.hpp"
#include "steiner/mst.hpp"

namespace steiner {

namespace {

constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;

SteinerTree empty_tree() { return SteinerTree{{}, 0}; }

}  // namespace

SteinerTree brute_force_solve(const SteinerInstance& instance) {
    const auto& terminals = instance.terminals();
    if (terminals.size() == 1) return empty_tree();

    std::vector<NodeId> steiner_nodes;
    for (NodeId v = 0; v < instance.node_count(); ++v) {
        if (!instance.is_terminal(v)) steiner_nodes.push_back(v);
    }
    const int m = static_cast<int>(steiner_nodes.size());
    if (m > 20) {
        throw ExactLimitError("brute force refuses " + std::to_string(m) +
                              " non-terminal nodes (limit 20)");
    }

    Cost best_cost = kInf;
    std::vector<Edge> best_edges;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<NodeId> nodes(terminals.begin(), terminals.end());
        for (int i = 0; i < m; ++i) {
            if ((mask >> i) & 1u) nodes.push_back(steiner_nodes[static_cast<std::size_t>(i)]);
        }
        std::sort(nodes.begin(), nodes.end());
        if (!is_connected(instance.node_count(), instance.edges(), nodes)) continue;
        const auto edges = induced_edges(instance.edges(), nodes, instance.node_count());
        const auto mst = minimum_spanning_tree(nodes, edges);
        const Cost cost = total_weight(mst);
        if (cost < best_cost) {
            best_cost = cost;
            best_edges = mst;
        }
    }
    if (best_cost >= kInf) throw GraphError("no subset connects the terminals");

    std::vector<EdgeKey> keys;
    keys.reserve(best_edges.size());
    for (const auto& e : best_edges) keys.push_back(make_edge_key(e.u, e.v));
    return make_tree(instance, keys);
}

SteinerTree exact_solve(const SteinerInstance& instance, const ExactConfig& config) {
    const auto& terminals = instance.terminals();
    if (terminals.size() == 1) return empty_tree();
    if (static_cast<int>(terminals.size()) > config.terminal_limit) {
        throw ExactLimitError("terminal count " + std::to_string(terminals.size()) +
                              " exceeds configured limit " +
                              std::to_string(config.terminal_limit));
    }

    const int n = instance.node_count();
    std::vector<NodeId> all_nodes(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) all_nodes[static_cast<std::size_t>(v)] = v;
    const MetricClosure closure = metric_closure_over(instance, all_nodes);

    // Root at the last terminal; DP runs over subsets of the rest.
    const NodeId root = terminals.back();
    std::vector<NodeId> base(terminals.begin(), terminals.end() - 1);
    const int k = static_cast<int>(base.size());
    const std::size_t subset_count = std::size_t{1} << k;
    const std::size_t nn = static_cast<std::size_t>(n);

    auto idx = [nn](std::size_t mask, NodeId v) { return mask * nn + static_cast<std::size_t>(v); };
    std::vector<Cost> cost(subset_count * nn, kInf);
    std::vector<std::uint32_t> split(subset_count * nn, 0);
    // Walk source per state; the relax step may route a state through any
    // node, u == v means no walk. n fits in uint8 only up to 255, so use
    // int32 and accept the memory.
    std::vector<NodeId> walk(subset_count * nn, -1);

    std::vector<Cost> merged(nn);
    std::vector<std::uint32_t> merged_split(nn);

    for (std::size_t mask = 1; mask < subset_count; ++mask) {
        if (std::popcount(mask) == 1) {
            const int bit = std::countr_zero(mask);
            const NodeId t = base[static_cast<std::size_t>(bit)];
            const auto& dist = closure.dist[static_cast<std::size_t>(t)];
            for (NodeId v = 0; v < n; ++v) {
                cost[idx(mask, v)] = dist[static_cast<std::size_t>(v)];
                walk[idx(mask, v)] = v;
            }
            continue;
        }
        // Merge: combine two disjoint sub-states meeting at v. Each split is
        // visited once by keeping the lowest set bit on the J side; ties go
        // to the smaller J mask.
        const std::size_t low = mask & (~mask + 1);
        for (NodeId v = 0; v < n; ++v) {
            merged[static_cast<std::size_t>(v)] = kInf;
            merged_split[static_cast<std::size_t>(v)] = 0;
        }
        for (std::size_t j = (mask - 1) & mask; j > 0; j = (j - 1) & mask) {
            if ((j & low) == 0) continue;
            const std::size_t rest = mask ^ j;
            const Cost* cj = &cost[idx(j, 0)];
            const Cost* cr = &cost[idx(rest, 0)];
            for (std::size_t v = 0; v < nn; ++v) {
                const Cost c = cj[v] + cr[v];
                if (c <= merged[v]) {
                    merged[v] = c;
                    merged_split[v] = static_cast<std::uint32_t>(j);
                }
            }
        }
        // Relax: route the merged state along shortest paths; ties go to the
        // smallest source node.
        Cost* out = &cost[idx(mask, 0)];
        for (NodeId u = 0; u < n; ++u) {
            const Cost cu = merged[static_cast<std::size_t>(u)];
            if (cu >= kInf) continue;
            const auto& dist = closure.dist[static_cast<std::size_t>(u)];
            for (std::size_t v = 0; v < nn; ++v) {
                const Cost c = cu + dist[v];
                if (c < out[v]) {
                    out[v] = c;
                    walk[idx(mask, static_cast<NodeId>(v))] = u;
                }
            }
        }
        std::uint32_t* sp = &split[idx(mask, 0)];
        for (std::size_t v = 0; v < nn; ++v) sp[v] = merged_split[v];
    }

    const std::size_t full = subset_count - 1;
    const Cost optimum = cost[idx(full, root)];
    if (optimum >= kInf) throw GraphError("terminals are not connected");

    // Rebuild: follow the walk to the merge node, then recurse on both sides
    // of the stored split.
    std::set<EdgeKey> tree_edges;
    auto add_path = [&](NodeId from, NodeId to) {
        if (from == to) return;
        const auto& path = closure.witness_paths[static_cast<std::size_t>(from)]
                                                [static_cast<std::size_t>(to)];
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            tree_edges.insert(make_edge_key(path[i], path[i + 1]));
        }
    };
    std::vector<std::pair<std::size_t, NodeId>> stack{{full, root}};
    while (!stack.empty()) {
        const auto [mask, v] = stack.back();
        stack.pop_back();
        if (std::popcount(mask) == 1) {
            const NodeId t = base[static_cast<std::size_t>(std::countr_zero(mask))];
            add_path(v, t);
            continue;
        }
        const NodeId u = walk[idx(mask, v)];
        add_path(v, u);
        const std::size_t j = split[idx(mask, u)];
        stack.emplace_back(j, u);
        stack.emplace_back(mask ^ j, u);
    }

    SteinerTree tree = make_tree(instance, {tree_edges.begin(), tree_edges.end()});
    if (tree.cost != optimum) {
        throw std::logic_error("rebuilt tree cost " + std::to_string(tree.cost) +
                               " does not match optimum " + std::to_string(optimum));
    }
    return tree;
}

}  // namespace steiner
