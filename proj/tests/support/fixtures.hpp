#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steiner/generators.hpp"
#include "steiner/gnn/model.hpp"
#include "steiner/instance.hpp"

namespace steiner::testing {

// Four nodes, terminals {0,1,2}: every terminal pair is connected directly
// at weight 5 and through node 3 at 3+3. The closure tree costs 10, the
// star through node 3 costs 9.
SteinerInstance diamond_instance();

// Path 0-1-2, weights 5 and 5, terminals {0,2}.
SteinerInstance path3_instance();

// Triangle with weights 1, 2, 3; every node a terminal.
SteinerInstance triangle_instance();

// Small instances cycling the four generator models, node counts 8..12,
// terminal counts 2..5, alternating weighted and unit edges.
std::vector<SteinerInstance> small_instances(int count, std::uint64_t seed);

// Minimum cost over every simple path from s to t, by exhaustive DFS.
// Independent of the Dijkstra implementation; tiny graphs only.
Cost enumerated_distance(const SteinerInstance& instance, NodeId s, NodeId t);

// Relabels nodes as new_id = perm[old_id]; terminals, edges and coords move
// along. perm must be a permutation of 0..n-1.
SteinerInstance relabel(const SteinerInstance& instance, const std::vector<NodeId>& perm);

// Applies the inverse relabeling to a tree built on the relabeled instance.
SteinerTree relabel_tree_back(const SteinerInstance& original,
                              const SteinerTree& tree, const std::vector<NodeId>& perm);

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::string worst_param;
};

// Compares every analytic gradient against central finite differences of
// the train-mode loss. Relative error uses a 1e-3 magnitude floor so
// near-zero gradients are compared absolutely.
GradCheckResult finite_difference_check(gnn::GnnModel& model, const SteinerInstance& instance,
                                        const std::vector<NodeId>& partial, NodeId truth,
                                        double eps);

}  // namespace steiner::testing
