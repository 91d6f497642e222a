#include "steiner/mcts.hpp"

#include <algorithm>
#include <cmath>

#include "steiner/approx.hpp"
#include "steiner/tree_build.hpp"

namespace steiner {

namespace {

struct Selection {
    std::vector<char> flags;  // terminals plus played/simulated nodes
    std::vector<NodeId> order;
    int non_terminals = 0;

    void add(const SteinerInstance& instance, NodeId v) {
        flags[static_cast<std::size_t>(v)] = 1;
        order.push_back(v);
        if (!instance.is_terminal(v)) ++non_terminals;
    }
};

Selection initial_selection(const SteinerInstance& instance) {
    Selection s;
    s.flags.assign(static_cast<std::size_t>(instance.node_count()), 0);
    for (const NodeId t : instance.terminals()) s.flags[static_cast<std::size_t>(t)] = 1;
    return s;
}

class Search {
public:
    Search(const SteinerInstance& instance, const gnn::GnnModel& model,
           const SearchConfig& config)
        : instance_(instance), model_(model), config_(config) {
        const int spare = instance.node_count() - instance.terminal_count();
        closure_budget_ = static_cast<int>(
            std::ceil(0.10 * static_cast<double>(spare)));
    }

    bool stopped(const Selection& s) const {
        if (config_.heuristic == Heuristic::mst) {
            std::vector<NodeId> nodes;
            for (std::size_t v = 0; v < s.flags.size(); ++v) {
                if (s.flags[v]) nodes.push_back(static_cast<NodeId>(v));
            }
            return is_connected(instance_.node_count(), instance_.edges(), nodes);
        }
        return s.non_terminals >= closure_budget_;
    }

    SteinerTree build(const Selection& s) const {
        std::vector<NodeId> nodes;
        for (std::size_t v = 0; v < s.flags.size(); ++v) {
            if (s.flags[v]) nodes.push_back(static_cast<NodeId>(v));
        }
        if (config_.heuristic == Heuristic::mst) {
            return build_mst_heuristic(instance_, nodes);
        }
        return build_metric_closure_heuristic(instance_, nodes);
    }

    // Completes the selection greedily by the model's top prior, then builds
    // a tree. Reward is the negated cost: search maximizes.
    double evaluate(Selection s) const {
        while (!stopped(s)) {
            const NodeId next = best_legal(s);
            s.add(instance_, next);
        }
        return -static_cast<double>(build(s).cost);
    }

    NodeId best_legal(const Selection& s) const {
        std::vector<char> legal(s.flags.size());
        for (std::size_t i = 0; i < legal.size(); ++i) legal[i] = s.flags[i] ? 0 : 1;
        const auto probs = model_.forward_eval(instance_, s.flags, &legal);
        NodeId best = -1;
        double best_p = -1.0;
        for (NodeId v = 0; v < instance_.node_count(); ++v) {
            if (!legal[static_cast<std::size_t>(v)]) continue;
            if (probs[static_cast<std::size_t>(v)] > best_p) {
                best_p = probs[static_cast<std::size_t>(v)];
                best = v;
            }
        }
        if (best < 0) throw GraphError("no legal node to add");
        return best;
    }

    void expand(SearchNode& node, const Selection& s) const {
        node.expanded = true;
        if (stopped(s)) {
            node.terminal = true;
            return;
        }
        std::vector<char> legal(s.flags.size());
        for (std::size_t i = 0; i < legal.size(); ++i) legal[i] = s.flags[i] ? 0 : 1;
        const auto probs = model_.forward_eval(instance_, s.flags, &legal);
        for (NodeId v = 0; v < instance_.node_count(); ++v) {
            if (!legal[static_cast<std::size_t>(v)]) continue;
            ChildEdge edge;
            edge.action = v;
            edge.prior = probs[static_cast<std::size_t>(v)];
            node.children.push_back(std::move(edge));
        }
    }

    void simulate(SearchNode& root, const Selection& root_selection) const {
        Selection s = root_selection;
        SearchNode* node = &root;
        std::vector<std::pair<SearchNode*, int>> path;
        while (node->expanded && !node->terminal) {
            const int c = select_child(*node, config_.c_puct);
            path.emplace_back(node, c);
            ChildEdge& edge = node->children[static_cast<std::size_t>(c)];
            s.add(instance_, edge.action);
            if (!edge.child) edge.child = std::make_unique<SearchNode>();
            node = edge.child.get();
        }
        if (!node->expanded) expand(*node, s);
        const double reward = evaluate(s);
        node->evaluations += 1;
        node->visits += 1;
        for (auto& [n, c] : path) {
            n->visits += 1;
            ChildEdge& edge = n->children[static_cast<std::size_t>(c)];
            edge.visits += 1;
            if (!edge.has_value || reward > edge.best_reward) {
                edge.has_value = true;
                edge.best_reward = reward;
            }
        }
        // The backup loop above bumps every node on the path except the leaf
        // it already counted; root visits were bumped by its path entry or,
        // if the root is the leaf, by the leaf bump.
    }

    SearchResult run() {
        Selection s = initial_selection(instance_);
        auto root = std::make_unique<SearchNode>();
        SearchResult result;
        while (!stopped(s)) {
            for (int i = 0; i < config_.simulations; ++i) simulate(*root, s);
            if (root->children.empty()) throw GraphError("expanded root has no children");
            const int c = play_child(*root);
            ChildEdge& edge = root->children[static_cast<std::size_t>(c)];
            s.add(instance_, edge.action);
            result.selection.push_back(edge.action);
            if (config_.collect_trace) {
                MoveRecord record;
                record.played = edge.action;
                record.edge_visits = edge.visits;
                record.best_reward = edge.best_reward;
                for (const auto& e : root->children) record.total_child_visits += e.visits;
                result.trace.push_back(record);
            }
            // The played child keeps its statistics and becomes the root.
            auto next = edge.child ? std::move(edge.child) : std::make_unique<SearchNode>();
            if (config_.keep_tree) result.move_roots.emplace_back(std::move(root));
            root = std::move(next);
        }

        SteinerTree searched = build(s);
        SteinerTree fallback = two_approximation(instance_);
        result.search_cost = searched.cost;
        result.fallback_cost = fallback.cost;
        result.fallback_used = fallback.cost < searched.cost;
        result.tree = result.fallback_used ? std::move(fallback) : std::move(searched);
        return result;
    }

private:
    const SteinerInstance& instance_;
    const gnn::GnnModel& model_;
    const SearchConfig& config_;
    int closure_budget_ = 0;
};

}  // namespace

std::string to_string(Heuristic h) {
    return h == Heuristic::mst ? "mst" : "metric-closure";
}

Heuristic heuristic_from_string(const std::string& name) {
    if (name == "mst") return Heuristic::mst;
    if (name == "metric-closure") return Heuristic::metric_closure;
    throw GraphError("unknown heuristic: " + name);
}

Heuristic default_heuristic(const SteinerInstance& instance) {
    if (instance.coords().has_value() || instance.unweighted()) return Heuristic::mst;
    return Heuristic::metric_closure;
}

int default_simulations(int node_count) { return node_count <= 50 ? 800 : 1200; }

int play_child(const SearchNode& node) {
    if (node.children.empty()) throw GraphError("move decision on a node without children");
    double best = -1.0;
    double worst = 0.0;
    bool any = false;
    for (const auto& e : node.children) {
        if (!e.has_value) continue;
        if (!any) {
            best = worst = e.best_reward;
            any = true;
        } else {
            best = std::max(best, e.best_reward);
            worst = std::min(worst, e.best_reward);
        }
    }
    int chosen = -1;
    double chosen_q = -1.0;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        const auto& e = node.children[i];
        double q = 0.0;
        if (e.has_value) {
            q = best == worst ? 1.0 : (e.best_reward - worst) / (best - worst);
        }
        const bool better =
            chosen < 0 || q > chosen_q ||
            (q == chosen_q && e.visits > node.children[static_cast<std::size_t>(chosen)].visits);
        if (better) {
            chosen = static_cast<int>(i);
            chosen_q = q;
        }
    }
    return chosen;
}

int select_child(const SearchNode& node, double c_puct) {
    if (!node.expanded || node.children.empty()) {
        throw GraphError("selection on a node without children");
    }
    int total = 0;
    for (const auto& e : node.children) total += e.visits;
    const double sqrt_total = std::sqrt(static_cast<double>(total));

    double best = 0.0;
    double worst = 0.0;
    bool any = false;
    for (const auto& e : node.children) {
        if (!e.has_value) continue;
        if (!any) {
            best = worst = e.best_reward;
            any = true;
        } else {
            best = std::max(best, e.best_reward);
            worst = std::min(worst, e.best_reward);
        }
    }

    int chosen = -1;
    double chosen_score = 0.0;
    double chosen_prior = 0.0;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        const auto& e = node.children[i];
        double q = 0.0;
        if (e.has_value) {
            q = best == worst ? 1.0 : (e.best_reward - worst) / (best - worst);
        }
        const double u = c_puct * e.prior * sqrt_total / (1.0 + e.visits);
        const double score = q + u;
        const bool better = chosen < 0 || score > chosen_score ||
                            (score == chosen_score && e.prior > chosen_prior);
        if (better) {
            chosen = static_cast<int>(i);
            chosen_score = score;
            chosen_prior = e.prior;
        }
    }
    return chosen;
}

SearchResult run_search(const SteinerInstance& instance, const gnn::GnnModel& model,
                        const SearchConfig& config) {
    if (config.simulations < 1) throw GraphError("simulation budget must be at least 1");
    Search search(instance, model, config);
    return search.run();
}

}  // namespace steiner
