#pragma once

#include "steiner/instance.hpp"

namespace steiner {

// Metric-closure 2-approximation: spanning tree of the terminal closure,
// closure edges expanded into their shortest paths, a spanning tree of the
// expanded subgraph, then non-terminal leaves pruned. Cost is at most twice
// the optimum.
SteinerTree two_approximation(const SteinerInstance& instance);

}  // namespace steiner
