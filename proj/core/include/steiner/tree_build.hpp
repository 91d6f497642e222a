#pragma once

#include <vector>

#include "steiner/instance.hpp"

namespace steiner {

// Both builders turn a selected node set (which must contain every terminal)
// into a valid tree. `selected` may be in any order; duplicates are ignored.

// Spanning tree of the induced subgraph, non-terminal leaves pruned. If the
// induced subgraph is disconnected, nodes from `extension_order` are appended
// in order until it connects; throws GraphError when the order runs out
// first.
SteinerTree build_mst_heuristic(const SteinerInstance& instance,
                                const std::vector<NodeId>& selected,
                                const std::vector<NodeId>& extension_order = {});

// Metric closure over the selected set, spanning tree of the closure,
// witness paths expanded and re-spanned, non-terminal leaves pruned. With
// the terminal set alone this is exactly the classic 2-approximation.
SteinerTree build_metric_closure_heuristic(const SteinerInstance& instance,
                                           const std::vector<NodeId>& selected);

}  // namespace steiner
