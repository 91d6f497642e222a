#pragma once

#include "steiner/instance.hpp"

namespace steiner {

// Complete graph on a node subset with shortest-path distances as weights.
// `nodes` is the terminal set for the classic closure; the tree heuristics
// also build closures over terminal-plus-selected sets.
struct MetricClosure {
    std::vector<NodeId> nodes;                          // sorted
    std::vector<std::vector<Cost>> dist;                // |nodes| x |nodes|
    std::vector<std::vector<std::vector<NodeId>>> witness_paths;  // node sequences, [i][j]

    int size() const { return static_cast<int>(nodes.size()); }
};

// Closure over the instance's terminal set.
MetricClosure metric_closure(const SteinerInstance& instance);

// Closure over an arbitrary nonempty node subset.
MetricClosure metric_closure_over(const SteinerInstance& instance, std::vector<NodeId> nodes);

}  // namespace steiner
