#pragma once

#include "steiner/instance.hpp"

namespace steiner {

struct ExactConfig {
    // Subset DP is exponential in the terminal count; refuse beyond this.
    int terminal_limit = 14;
};

class ExactLimitError : public GraphError {
public:
    explicit ExactLimitError(const std::string& what) : GraphError(what) {}
};

// Optimal tree by enumerating every subset of non-terminal nodes and taking
// the cheapest spanning tree of the induced subgraph. Exponential in
// |V| - |T| (capped at 20); exists as an independent check on the DP below.
SteinerTree brute_force_solve(const SteinerInstance& instance);

// Optimal tree by dynamic programming over (terminal subset, attachment
// node) states: subsets merge at a node, then states relax along shortest
// paths. Exponential in |T|; the tree is rebuilt from split and walk
// backpointers and its cost is checked against the DP optimum.
SteinerTree exact_solve(const SteinerInstance& instance, const ExactConfig& config = {});

}  // namespace steiner
