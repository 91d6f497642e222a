#pragma once

#include "steiner/instance.hpp"

namespace steiner {

struct ValidationReport {
    bool valid = false;
    Cost cost = 0;
    std::vector<std::string> violations;
};

// Checks that the tree's edges exist in the instance, that they form a tree
// (acyclic, connected) and that every terminal is covered. Each violated
// property is reported separately; cost is the exact edge-weight sum.
ValidationReport validate_solution(const SteinerInstance& instance, const SteinerTree& tree);

// Repeatedly removes non-terminal leaves. Idempotent; never increases cost.
SteinerTree prune_tree(const SteinerInstance& instance, const SteinerTree& tree);

}  // namespace steiner
