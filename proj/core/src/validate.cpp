#include "steiner/validate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace steiner {

ValidationReport validate_solution(const SteinerInstance& instance, const SteinerTree& tree) {
    ValidationReport report;

    std::set<EdgeKey> seen;
    std::set<NodeId> covered;
    Cost cost = 0;
    bool edges_ok = true;
    for (const Edge& e : tree.edges) {
        const EdgeKey key = make_edge_key(e.u, e.v);
        if (!seen.insert(key).second) {
            report.violations.push_back("duplicate edge {" + std::to_string(key.u) + "," + std::to_string(key.v) + "}");
            edges_ok = false;
            continue;
        }
        auto w = instance.edge_weight(e.u, e.v);
        if (!w) {
            report.violations.push_back("edge {" + std::to_string(key.u) + "," + std::to_string(key.v) + "} not in instance");
            edges_ok = false;
            continue;
        }
        if (e.w != *w) {
            report.violations.push_back("edge {" + std::to_string(key.u) + "," + std::to_string(key.v) + "} carries wrong weight");
            edges_ok = false;
        }
        cost += *w;
        covered.insert(e.u);
        covered.insert(e.v);
    }
    report.cost = cost;

    // A single-terminal instance is solved by the empty tree.
    if (tree.edges.empty() && instance.terminal_count() == 1) {
        report.valid = edges_ok;
        return report;
    }

    const std::vector<NodeId> nodes(covered.begin(), covered.end());
    bool tree_ok = true;
    if (!tree.edges.empty()) {
        if (tree.edges.size() + 1 != nodes.size()) {
            report.violations.push_back("not a tree: edge set contains a cycle");
            tree_ok = false;
        }
        std::vector<Edge> plain(tree.edges.begin(), tree.edges.end());
        if (!is_connected(instance.node_count(), plain, nodes)) {
            report.violations.push_back("not a tree: edge set is disconnected");
            tree_ok = false;
        }
    }

    bool terminals_ok = true;
    for (NodeId t : instance.terminals()) {
        if (!covered.contains(t)) {
            report.violations.push_back("terminal " + std::to_string(t) + " uncovered");
            terminals_ok = false;
        }
    }

    report.valid = edges_ok && tree_ok && terminals_ok && !tree.edges.empty();
    if (tree.edges.empty() && report.violations.empty()) {
        report.violations.push_back("empty edge set does not span the terminals");
    }
    return report;
}

SteinerTree prune_tree(const SteinerInstance& instance, const SteinerTree& tree) {
    std::map<NodeId, int> degree;
    std::set<EdgeKey> alive;
    for (const Edge& e : tree.edges) {
        alive.insert(make_edge_key(e.u, e.v));
        ++degree[e.u];
        ++degree[e.v];
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = alive.begin(); it != alive.end();) {
            const auto [u, v] = *it;
            const bool u_leaf = degree[u] == 1 && !instance.is_terminal(u);
            const bool v_leaf = degree[v] == 1 && !instance.is_terminal(v);
            if (u_leaf || v_leaf) {
                --degree[u];
                --degree[v];
                it = alive.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }

    return make_tree(instance, {alive.begin(), alive.end()});
}

}  // namespace steiner
