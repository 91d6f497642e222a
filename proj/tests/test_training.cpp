#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "steiner/exact.hpp"
#include "steiner/training.hpp"

using namespace steiner;
using steiner::testing::small_instances;
using steiner::testing::triangle_instance;

namespace {

// Terminals {0, 2} joined by the cheap path through 3 and 4; node 1 hangs
// off to the side. The optimal tree is 0-3-4-2 with Steiner nodes {3, 4}.
SteinerInstance two_steiner_instance() {
    return SteinerInstance::create(5,
                                   {make_edge(0, 3, 1), make_edge(3, 4, 1), make_edge(4, 2, 1),
                                    make_edge(0, 2, 9), make_edge(0, 1, 9)},
                                   {0, 2}, std::nullopt, "two-steiner");
}

std::vector<SteinerInstance> training_corpus(int count, std::uint64_t seed) {
    auto instances = small_instances(count, seed);
    return instances;
}

}  // namespace

TEST_CASE("two steiner nodes expand into both orderings") {
    const auto inst = two_steiner_instance();
    const auto tree = exact_solve(inst);
    REQUIRE(tree.cost == 3);

    const auto samples = expand_permutations(inst, tree, 10, 1);
    REQUIRE(samples.size() == 4);
    // Orderings enumerate in lexicographic order: [3,4] then [4,3].
    CHECK(samples[0].partial == std::vector<NodeId>{0, 2});
    CHECK(samples[0].truth == 3);
    CHECK(samples[1].partial == std::vector<NodeId>{0, 2, 3});
    CHECK(samples[1].truth == 4);
    CHECK(samples[2].partial == std::vector<NodeId>{0, 2});
    CHECK(samples[2].truth == 4);
    CHECK(samples[3].partial == std::vector<NodeId>{0, 2, 4});
    CHECK(samples[3].truth == 3);
    for (const auto& s : samples) CHECK(s.instance_id == "two-steiner");

    // Requesting more permutations than exist changes nothing.
    CHECK(expand_permutations(inst, tree, 1000, 9).size() == 4);
}

TEST_CASE("trees without steiner nodes yield no samples") {
    const auto triangle = triangle_instance();
    const auto tree = exact_solve(triangle);
    CHECK(expand_permutations(triangle, tree, 5, 1).empty());
}

TEST_CASE("sampling mode emits k permutations deterministically") {
    // Star of three unit paths from 0 to terminals 4, 5, 6 through Steiner
    // nodes 1, 2, 3: optimal tree has Steiner nodes {0, 1, 2, 3}, m! = 24.
    SteinerInstance star = SteinerInstance::create(
        7,
        {make_edge(0, 1, 1), make_edge(1, 4, 1), make_edge(0, 2, 1), make_edge(2, 5, 1),
         make_edge(0, 3, 1), make_edge(3, 6, 1), make_edge(4, 5, 9), make_edge(5, 6, 9)},
        {4, 5, 6}, std::nullopt, "star");
    const auto tree = exact_solve(star);
    REQUIRE(tree.cost == 6);

    const auto a = expand_permutations(star, tree, 3, 42);
    const auto b = expand_permutations(star, tree, 3, 42);
    CHECK(a.size() == 12);  // 3 permutations x 4 prefix positions
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].partial == b[i].partial);
        CHECK(a[i].truth == b[i].truth);
    }
    CHECK(expand_permutations(star, tree, 24, 42).size() == 96);

    CHECK_THROWS_AS(expand_permutations(star, tree, 0, 1), TrainingError);
}

TEST_CASE("samples always extend a valid prefix toward the optimal tree") {
    const auto instances = training_corpus(10, 314);
    const auto samples = build_training_samples(instances, 3, 271);
    CHECK(!samples.empty());
    for (const auto& s : samples) {
        const auto it = std::find_if(
            instances.begin(), instances.end(),
            [&](const SteinerInstance& inst) { return inst.id() == s.instance_id; });
        REQUIRE(it != instances.end());
        const auto& inst = *it;

        CHECK(s.truth >= 0);
        CHECK(s.truth < inst.node_count());
        CHECK_FALSE(inst.is_terminal(s.truth));
        CHECK(std::find(s.partial.begin(), s.partial.end(), s.truth) == s.partial.end());

        // The prefix starts with the terminal set.
        REQUIRE(s.partial.size() >= static_cast<std::size_t>(inst.terminal_count()));
        for (int i = 0; i < inst.terminal_count(); ++i) {
            CHECK(s.partial[static_cast<std::size_t>(i)] ==
                  inst.terminals()[static_cast<std::size_t>(i)]);
        }
        // Later entries are distinct non-terminals.
        std::set<NodeId> seen;
        for (std::size_t i = static_cast<std::size_t>(inst.terminal_count());
             i < s.partial.size(); ++i) {
            CHECK_FALSE(inst.is_terminal(s.partial[i]));
            CHECK(seen.insert(s.partial[i]).second);
        }

        // Truth lies on the optimal tree for this instance.
        const auto tree = exact_solve(inst);
        const auto nodes = tree.nodes();
        CHECK(std::find(nodes.begin(), nodes.end(), s.truth) != nodes.end());
    }
}

TEST_CASE("jsonl round trips and reports the offending line") {
    const auto inst = two_steiner_instance();
    const auto samples = expand_permutations(inst, exact_solve(inst), 10, 1);
    const std::string text = samples_to_jsonl(samples);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    const auto back = samples_from_jsonl(text);
    REQUIRE(back.size() == samples.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].instance_id == samples[i].instance_id);
        CHECK(back[i].partial == samples[i].partial);
        CHECK(back[i].truth == samples[i].truth);
    }

    CHECK_THROWS_WITH(samples_from_jsonl("{\"instance_id\":\"x\",\"partial\":[],\"truth\":1}\n"
                                         "{\"instance_id\":\"x\"}\n"),
                      doctest::Contains("line 2"));
    CHECK_THROWS_AS(samples_from_jsonl("garbage\n"), TrainingError);
    CHECK(samples_from_jsonl("").empty());
    CHECK(samples_from_jsonl("\n\n").empty());
}

TEST_CASE("training runs epochs, tracks the best one, and stops early") {
    gnn::ModelConfig config;
    config.embed_dim = 8;
    config.edge_dim = 8;
    config.batch_size = 8;

    const auto instances = training_corpus(8, 2718);
    const auto samples = build_training_samples(instances, 2, 99);
    REQUIRE(!samples.empty());

    TrainOptions options;
    options.max_epochs = 12;
    options.patience = 3;
    options.learning_rate = 1e-3;
    options.seed = 5;

    const auto result = train(gnn::GnnModel(config, 1), instances, samples, options);
    CHECK(result.epochs_run == static_cast<int>(result.history.size()));
    CHECK(result.epochs_run <= options.max_epochs);
    REQUIRE(result.best_epoch >= 1);
    REQUIRE(result.best_epoch <= result.epochs_run);
    CHECK(result.history[static_cast<std::size_t>(result.best_epoch - 1)].val_loss ==
          result.best_val_loss);
    for (const auto& stats : result.history) {
        CHECK(stats.val_loss >= result.best_val_loss);
        CHECK(std::isfinite(stats.train_loss));
    }
    CHECK(result.epochs_run - result.best_epoch <= options.patience);

    // Same inputs, same model seed: identical run.
    const auto again = train(gnn::GnnModel(config, 1), instances, samples, options);
    CHECK(again.best_val_loss == result.best_val_loss);
    CHECK(again.epochs_run == result.epochs_run);
}

TEST_CASE("training rejects degenerate setups") {
    gnn::ModelConfig config;
    config.embed_dim = 8;
    config.edge_dim = 8;

    const auto instances = training_corpus(4, 11);
    const auto samples = build_training_samples(instances, 2, 1);

    TrainOptions options;
    options.max_epochs = 0;
    CHECK_THROWS_AS(train(gnn::GnnModel(config, 1), instances, samples, options),
                    TrainingError);

    options.max_epochs = 2;
    CHECK_THROWS_AS(train(gnn::GnnModel(config, 1), instances, {}, options), TrainingError);

    const std::vector<SteinerInstance> lonely{instances.front()};
    auto lonely_samples = samples;
    lonely_samples.erase(
        std::remove_if(lonely_samples.begin(), lonely_samples.end(),
                       [&](const TrainingSample& s) {
                           return s.instance_id != instances.front().id();
                       }),
        lonely_samples.end());
    if (!lonely_samples.empty()) {
        CHECK_THROWS_AS(train(gnn::GnnModel(config, 1), lonely, lonely_samples, options),
                        TrainingError);
    }

    TrainingSample stray;
    stray.instance_id = "no-such-instance";
    stray.truth = 0;
    CHECK_THROWS_AS(train(gnn::GnnModel(config, 1), instances, {stray}, options),
                    TrainingError);
}

TEST_CASE("exploding learning rates abort instead of returning garbage") {
    gnn::ModelConfig config;
    config.embed_dim = 8;
    config.edge_dim = 8;

    const auto instances = training_corpus(4, 77);
    const auto samples = build_training_samples(instances, 2, 3);

    TrainOptions options;
    options.max_epochs = 60;
    options.patience = 60;
    options.learning_rate = 1e9;
    CHECK_THROWS_AS(train(gnn::GnnModel(config, 1), instances, samples, options),
                    TrainingError);
}

TEST_CASE("top-1 evaluation counts argmax hits over legal nodes") {
    const auto inst = two_steiner_instance();
    const auto samples = expand_permutations(inst, exact_solve(inst), 10, 1);
    gnn::ModelConfig config;
    config.embed_dim = 8;
    config.edge_dim = 8;
    const auto zero = gnn::model_for_checkpoint(config, 0);

    const auto report = evaluate_top1(zero, {inst}, samples);
    CHECK(report.sample_count == 4);
    // Prefix [0,2] leaves 3 legal nodes, prefix [0,2,s] leaves 2.
    CHECK(report.uniform_baseline ==
          doctest::Approx((1.0 / 3 + 1.0 / 2 + 1.0 / 3 + 1.0 / 2) / 4));
    CHECK(report.top1_accuracy >= 0.0);
    CHECK(report.top1_accuracy <= 1.0);

    // With a single legal node the argmax cannot miss.
    SteinerInstance forced = SteinerInstance::create(
        3, {make_edge(0, 1, 1), make_edge(1, 2, 1), make_edge(0, 2, 9)}, {0, 2},
        std::nullopt, "forced");
    TrainingSample only;
    only.instance_id = "forced";
    only.partial = {0, 2};
    only.truth = 1;
    const auto forced_report = evaluate_top1(zero, {forced}, {only});
    CHECK(forced_report.top1_accuracy == 1.0);
    CHECK(forced_report.uniform_baseline == 1.0);

    CHECK_THROWS_AS(evaluate_top1(zero, {forced}, {TrainingSample{"forced", {0, 1, 2}, 1}}),
                    TrainingError);
}

TEST_CASE("a short training run beats guessing on its own training set") {
    gnn::ModelConfig config;
    config.embed_dim = 16;
    config.edge_dim = 16;
    config.batch_size = 16;

    const auto instances = training_corpus(12, 808);
    const auto samples = build_training_samples(instances, 4, 17);
    REQUIRE(samples.size() > 20);

    TrainOptions options;
    options.max_epochs = 40;
    options.patience = 40;
    options.learning_rate = 3e-3;
    options.seed = 2;
    const auto result = train(gnn::GnnModel(config, 9), instances, samples, options);

    const auto report = evaluate_top1(result.model, instances, samples);
    CHECK(report.top1_accuracy > report.uniform_baseline);
}
