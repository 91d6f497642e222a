#include "steiner/metric_closure.hpp"

#include <algorithm>

#include "steiner/shortest_paths.hpp"

namespace steiner {

MetricClosure metric_closure_over(const SteinerInstance& instance, std::vector<NodeId> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (nodes.empty()) throw GraphError("metric_closure_over: empty node set");

    const std::size_t k = nodes.size();
    MetricClosure closure;
    closure.nodes = nodes;
    closure.dist.assign(k, std::vector<Cost>(k, 0));
    closure.witness_paths.assign(k, std::vector<std::vector<NodeId>>(k));

    for (std::size_t i = 0; i < k; ++i) {
        const ShortestPaths sp = shortest_paths(instance, nodes[i]);
        for (std::size_t j = 0; j < k; ++j) {
            closure.dist[i][j] = sp.dist[static_cast<std::size_t>(nodes[j])];
            closure.witness_paths[i][j] = sp.path_to(nodes[j]);
        }
    }
    return closure;
}

MetricClosure metric_closure(const SteinerInstance& instance) {
    return metric_closure_over(instance, instance.terminals());
}

}  // namespace steiner
