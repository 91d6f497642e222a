#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "steiner/approx.hpp"
#include "steiner/exact.hpp"
#include "steiner/mcts.hpp"
#include "steiner/validate.hpp"

using namespace steiner;
using steiner::testing::diamond_instance;
using steiner::testing::small_instances;

namespace {

gnn::ModelConfig tiny_config() {
    gnn::ModelConfig config;
    config.embed_dim = 8;
    config.edge_dim = 8;
    return config;
}

SearchNode make_node(std::vector<ChildEdge> edges) {
    SearchNode node;
    node.expanded = true;
    node.children = std::move(edges);
    return node;
}

ChildEdge edge_of(NodeId action, double prior, int visits, double reward, bool has_value) {
    ChildEdge e;
    e.action = action;
    e.prior = prior;
    e.visits = visits;
    e.best_reward = reward;
    e.has_value = has_value;
    return e;
}

SteinerInstance instance_of(GraphModel model, int n, int terminals, bool weighted,
                            std::uint64_t seed) {
    GeneratorConfig config;
    config.model = model;
    config.n = n;
    config.terminal_count = terminals;
    config.weighted = weighted;
    config.seed = seed;
    return generate(config);
}

}  // namespace

TEST_CASE("heuristic names round trip") {
    CHECK(to_string(Heuristic::mst) == "mst");
    CHECK(to_string(Heuristic::metric_closure) == "metric-closure");
    CHECK(heuristic_from_string("mst") == Heuristic::mst);
    CHECK(heuristic_from_string("metric-closure") == Heuristic::metric_closure);
    CHECK_THROWS_AS(heuristic_from_string("greedy"), GraphError);
}

TEST_CASE("defaults pick the builder from the graph class and the budget from size") {
    CHECK(default_heuristic(instance_of(GraphModel::geometric, 12, 3, false, 1)) ==
          Heuristic::mst);
    CHECK(default_heuristic(instance_of(GraphModel::erdos_renyi, 12, 3, false, 1)) ==
          Heuristic::mst);
    CHECK(default_heuristic(instance_of(GraphModel::erdos_renyi, 12, 3, true, 1)) ==
          Heuristic::metric_closure);
    CHECK(default_heuristic(instance_of(GraphModel::watts_strogatz, 12, 3, true, 1)) ==
          Heuristic::metric_closure);

    CHECK(default_simulations(20) == 800);
    CHECK(default_simulations(50) == 800);
    CHECK(default_simulations(51) == 1200);
}

TEST_CASE("fresh edges tie on score and resolve by prior") {
    // No visits anywhere: exploration terms are all zero, so the prior rules.
    const auto node = make_node([] {
        std::vector<ChildEdge> edges;
        edges.push_back(edge_of(4, 0.7, 0, 0.0, false));
        edges.push_back(edge_of(5, 0.2, 0, 0.0, false));
        edges.push_back(edge_of(6, 0.1, 0, 0.0, false));
        return edges;
    }());
    CHECK(select_child(node, 1.3) == 0);
}

TEST_CASE("value dominates at small c_puct, the prior at large c_puct") {
    // Child 1 is the only one with a value, so it normalizes to 1 and scores
    // 1 + 1.3 * 0.2 * 1 / 2 = 1.13 against child 0's exploration-only
    // 1.3 * 0.7 * 1 / 1 = 0.91.
    auto node = make_node([] {
        std::vector<ChildEdge> edges;
        edges.push_back(edge_of(4, 0.7, 0, 0.0, false));
        edges.push_back(edge_of(5, 0.2, 1, -9.0, true));
        edges.push_back(edge_of(6, 0.1, 0, 0.0, false));
        return edges;
    }());
    CHECK(select_child(node, 1.3) == 1);
    // A large exploration constant flips the choice back to the prior.
    CHECK(select_child(node, 10.0) == 0);
}

TEST_CASE("normalized values compare best against worst") {
    auto node = make_node([] {
        std::vector<ChildEdge> edges;
        edges.push_back(edge_of(4, 0.3, 3, -10.0, true));
        edges.push_back(edge_of(5, 0.3, 3, -9.0, true));
        return edges;
    }());
    // q = 0 vs 1; exploration adds 1.3 * 0.3 * sqrt(6) / 4 to each side.
    CHECK(select_child(node, 1.3) == 1);
    CHECK(play_child(node) == 1);
}

TEST_CASE("single children and valueless nodes have trivial choices") {
    auto only = make_node({});
    only.children.push_back(edge_of(2, 1.0, 0, 0.0, false));
    CHECK(select_child(only, 1.3) == 0);
    CHECK(play_child(only) == 0);

    SearchNode unexpanded;
    CHECK_THROWS_AS(select_child(unexpanded, 1.3), GraphError);
    CHECK_THROWS_AS(play_child(unexpanded), GraphError);
}

TEST_CASE("the move prefers value, then visits, then the smaller action") {
    auto node = make_node([] {
        std::vector<ChildEdge> edges;
        edges.push_back(edge_of(1, 0.1, 2, -20.0, true));
        edges.push_back(edge_of(2, 0.1, 5, -12.0, true));
        edges.push_back(edge_of(3, 0.1, 9, -12.0, true));
        return edges;
    }());
    CHECK(play_child(node) == 2);  // same q = 1, more visits

    auto even = make_node([] {
        std::vector<ChildEdge> edges;
        edges.push_back(edge_of(7, 0.1, 4, -5.0, true));
        edges.push_back(edge_of(9, 0.1, 4, -5.0, true));
        return edges;
    }());
    CHECK(play_child(even) == 0);  // full tie keeps the first (smaller action)

    auto untried = make_node([] {
        std::vector<ChildEdge> edges;
        edges.push_back(edge_of(3, 0.9, 0, 0.0, false));
        edges.push_back(edge_of(4, 0.1, 6, -7.0, true));
        return edges;
    }());
    CHECK(play_child(untried) == 1);  // any value beats the q = 0 sentinel
}

TEST_CASE("the diamond search selects the hub and beats the approximation") {
    const auto inst = diamond_instance();
    gnn::GnnModel model(tiny_config(), 1);
    SearchConfig config;
    config.heuristic = Heuristic::metric_closure;
    config.simulations = 16;
    config.collect_trace = true;
    const auto result = run_search(inst, model, config);
    CHECK(result.selection == std::vector<NodeId>{3});
    CHECK(result.search_cost == 9);
    CHECK(result.fallback_cost == 10);
    CHECK_FALSE(result.fallback_used);
    CHECK(result.tree.cost == 9);
    CHECK(validate_solution(inst, result.tree).valid);
    REQUIRE(result.trace.size() == 1);
    CHECK(result.trace[0].played == 3);

    // The induced-subgraph rule stops immediately: the terminals alone form
    // a connected triangle.
    SearchConfig mst_config;
    mst_config.heuristic = Heuristic::mst;
    mst_config.simulations = 16;
    const auto mst_result = run_search(inst, model, mst_config);
    CHECK(mst_result.selection.empty());
    CHECK(mst_result.search_cost == 10);
    CHECK(mst_result.tree.cost == 10);
}

TEST_CASE("simulation counts are conserved in the first move's tree") {
    const auto inst = instance_of(GraphModel::erdos_renyi, 14, 3, true, 21);
    gnn::GnnModel model(tiny_config(), 2);
    SearchConfig config;
    config.heuristic = Heuristic::metric_closure;
    config.simulations = 50;
    config.collect_trace = true;
    config.keep_tree = true;
    const auto result = run_search(inst, model, config);
    REQUIRE(!result.move_roots.empty());
    REQUIRE(result.trace.size() == result.move_roots.size());

    const auto& first = *result.move_roots.front();
    CHECK(first.expanded);
    // Every simulation bumps the root; the first one expands it, later ones
    // descend through exactly one child edge.
    CHECK(first.visits == 50);
    int total = 0;
    double prior_sum = 0.0;
    for (const auto& e : first.children) {
        total += e.visits;
        prior_sum += e.prior;
        CHECK(e.prior >= 0.0);
    }
    CHECK(total == 49);
    CHECK(result.trace.front().total_child_visits == 49);
    CHECK(prior_sum == doctest::Approx(1.0).epsilon(1e-9));

    // Replaying the decision from the kept statistics picks the same move.
    for (std::size_t i = 0; i < result.move_roots.size(); ++i) {
        const auto& root = *result.move_roots[i];
        const int c = play_child(root);
        CHECK(root.children[static_cast<std::size_t>(c)].action == result.trace[i].played);
        CHECK(root.children[static_cast<std::size_t>(c)].visits ==
              result.trace[i].edge_visits);
    }

    // Later decision roots carry visits inherited from the reused subtree.
    for (std::size_t i = 1; i < result.move_roots.size(); ++i) {
        int later_total = 0;
        for (const auto& e : result.move_roots[i]->children) later_total += e.visits;
        CHECK(later_total >= config.simulations - 1);
        CHECK(result.trace[i].total_child_visits == later_total);
    }
}

TEST_CASE("the closure stopping rule selects a tenth of the spare nodes") {
    const auto inst = instance_of(GraphModel::erdos_renyi, 20, 4, true, 33);
    gnn::GnnModel model(tiny_config(), 3);
    SearchConfig config;
    config.heuristic = Heuristic::metric_closure;
    config.simulations = 8;
    const auto result = run_search(inst, model, config);
    // ceil(0.10 * 16) = 2 non-terminal selections.
    CHECK(result.selection.size() == 2);
    for (const NodeId v : result.selection) {
        CHECK_FALSE(inst.is_terminal(v));
        CHECK(v >= 0);
        CHECK(v < inst.node_count());
    }
    CHECK(validate_solution(inst, result.tree).valid);

    const auto wide = instance_of(GraphModel::erdos_renyi, 31, 3, true, 34);
    const auto wide_result = run_search(wide, model, config);
    // ceil(0.10 * 28) = 3.
    CHECK(wide_result.selection.size() == 3);
}

TEST_CASE("search is deterministic end to end") {
    const auto inst = instance_of(GraphModel::watts_strogatz, 16, 4, true, 5);
    gnn::GnnModel model(tiny_config(), 9);
    SearchConfig config;
    config.heuristic = Heuristic::metric_closure;
    config.simulations = 40;
    config.collect_trace = true;
    const auto a = run_search(inst, model, config);
    const auto b = run_search(inst, model, config);
    CHECK(a.selection == b.selection);
    CHECK(a.tree.edges == b.tree.edges);
    CHECK(a.search_cost == b.search_cost);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].best_reward == b.trace[i].best_reward);
        CHECK(a.trace[i].edge_visits == b.trace[i].edge_visits);
    }
}

TEST_CASE("the result never loses to the classic approximation") {
    gnn::GnnModel model(tiny_config(), 31);
    for (const auto& inst : small_instances(16, 1618)) {
        SearchConfig config;
        config.heuristic = default_heuristic(inst);
        config.simulations = 24;
        const auto result = run_search(inst, model, config);
        const auto approx = two_approximation(inst);
        CHECK(result.fallback_cost == approx.cost);
        CHECK(result.tree.cost <= approx.cost);
        CHECK(result.tree.cost == std::min(result.search_cost, result.fallback_cost));
        CHECK(result.tree.cost >= exact_solve(inst).cost);
        CHECK(validate_solution(inst, result.tree).valid);
        CHECK(result.fallback_used == (result.fallback_cost < result.search_cost));
    }
}

TEST_CASE("a larger budget never hurts on this suite") {
    gnn::GnnModel model(tiny_config(), 12);
    Cost lean_total = 0;
    Cost deep_total = 0;
    for (const auto& inst : small_instances(10, 515)) {
        SearchConfig lean;
        lean.heuristic = Heuristic::metric_closure;
        lean.simulations = 1;
        SearchConfig deep = lean;
        deep.simulations = 64;
        lean_total += run_search(inst, model, lean).tree.cost;
        deep_total += run_search(inst, model, deep).tree.cost;
    }
    CHECK(deep_total <= lean_total);
}

TEST_CASE("degenerate budgets are rejected") {
    const auto inst = diamond_instance();
    gnn::GnnModel model(tiny_config(), 1);
    SearchConfig config;
    config.simulations = 0;
    CHECK_THROWS_AS(run_search(inst, model, config), GraphError);
    config.simulations = -3;
    CHECK_THROWS_AS(run_search(inst, model, config), GraphError);
}
