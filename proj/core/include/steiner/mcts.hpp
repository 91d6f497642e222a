#pragma once

#include <memory>
#include <string>
#include <vector>

#include "steiner/gnn/model.hpp"
#include "steiner/instance.hpp"

namespace steiner {

// Which tree builder closes a selection into a tree, and with it the rule
// that ends the selection: the induced-subgraph builder stops when the
// selection induces a connected subgraph; the closure builder stops when 10%
// of the non-terminal nodes (rounded up) have been selected.
enum class Heuristic { mst, metric_closure };

std::string to_string(Heuristic h);
Heuristic heuristic_from_string(const std::string& name);

// Graph classes with coordinates or unit weights favor the induced-subgraph
// builder; everything else gets the closure builder.
Heuristic default_heuristic(const SteinerInstance& instance);

int default_simulations(int node_count);  // 800 up to 50 nodes, 1200 beyond

struct SearchConfig {
    Heuristic heuristic = Heuristic::metric_closure;
    int simulations = 800;  // per move
    double c_puct = 1.3;
    bool collect_trace = false;
    bool keep_tree = false;  // retain each move's decision root in the result
};

struct SearchNode;

// Statistics live on edges: visit count, best completed-solution reward seen
// below (costs enter negated, so bigger is better), and the model prior.
// `has_value` false is the "no reward yet" sentinel.
struct ChildEdge {
    NodeId action = -1;
    double prior = 0.0;
    int visits = 0;
    double best_reward = 0.0;
    bool has_value = false;
    std::unique_ptr<SearchNode> child;
};

struct SearchNode {
    bool expanded = false;
    bool terminal = false;
    int visits = 0;
    int evaluations = 0;
    std::vector<ChildEdge> children;  // ascending action id
};

// Exposed for testing: index of the edge maximizing normalized value plus
// prior-weighted exploration; ties prefer the higher prior, then the lower
// action id.
int select_child(const SearchNode& node, double c_puct);

// Exposed for testing: the move decision. Index of the edge with the best
// normalized value (best reward seen maps to 1, worst to 0, valueless edges
// to 0; all-equal values map to 1); ties prefer more visits, then the lower
// action id.
int play_child(const SearchNode& node);

struct MoveRecord {
    NodeId played = -1;
    int edge_visits = 0;
    double best_reward = 0.0;
    int total_child_visits = 0;  // across every edge of the decision root
};

struct SearchResult {
    SteinerTree tree;
    Cost search_cost = 0;    // cost of the tree built from the searched selection
    Cost fallback_cost = 0;  // classic 2-approximation cost
    bool fallback_used = false;
    std::vector<NodeId> selection;  // non-terminals in play order
    std::vector<MoveRecord> trace;
    // With keep_tree: each move's decision root, in order. The played edge
    // keeps its statistics; its subtree moved on to seed the next root.
    std::vector<std::shared_ptr<SearchNode>> move_roots;
};

// Prior-guided search: per move, `simulations` rounds of select / expand /
// evaluate / backup, then the best child is played and its subtree kept.
// The result is the cheaper of the searched tree and the 2-approximation,
// so it never loses to the classic bound.
SearchResult run_search(const SteinerInstance& instance, const gnn::GnnModel& model,
                        const SearchConfig& config);

}  // namespace steiner
