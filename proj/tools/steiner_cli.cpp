// Command line front end: instance generation, the three solvers, training
// data expansion, model training and the benchmark harness in one binary.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steiner/approx.hpp"
#include "steiner/bench.hpp"
#include "steiner/exact.hpp"
#include "steiner/generators.hpp"
#include "steiner/gnn/checkpoint.hpp"
#include "steiner/gnn/model.hpp"
#include "steiner/json_io.hpp"
#include "steiner/mcts.hpp"
#include "steiner/stp.hpp"
#include "steiner/training.hpp"
#include "steiner/validate.hpp"

namespace {

using steiner::SteinerInstance;
using steiner::SteinerTree;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

bool has_extension(const std::string& path, const std::string& ext) {
    return std::filesystem::path(path).extension() == ext;
}

SteinerInstance load_instance(const std::string& path) {
    const std::string text = steiner::read_text_file(path);
    if (has_extension(path, ".stp")) {
        // The embedded name wins; the filename stem only covers nameless files.
        SteinerInstance instance = steiner::parse_stp(text);
        if (instance.id().empty()) {
            instance = steiner::parse_stp(text, std::filesystem::path(path).stem().string());
        }
        return instance;
    }
    return steiner::instance_from_json(text);
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        if (content.empty() || content.back() != '\n') std::cout << '\n';
    } else {
        steiner::write_text_file(out_path, content);
    }
}

void check_tree(const SteinerInstance& instance, const SteinerTree& tree) {
    const steiner::ValidationReport report = steiner::validate_solution(instance, tree);
    if (!report.valid) {
        throw steiner::GraphError("invalid solution: " + report.violations.front());
    }
}

void emit_solution(const SteinerInstance& instance, const SteinerTree& tree, double runtime_ms,
                   const std::string& out_path) {
    check_tree(instance, tree);
    emit(steiner::solution_to_json(tree, runtime_ms), out_path);
    std::cerr << instance.id() << ": cost " << tree.cost << " (" << tree.edges.size()
              << " edges, " << runtime_ms << " ms)\n";
}

steiner::TerminalSpec terminal_spec(int terminals, const std::vector<double>& fractions) {
    if (!fractions.empty()) return fractions;
    return terminals;
}

std::optional<steiner::Heuristic> heuristic_choice(const std::string& name) {
    if (name == "auto") return std::nullopt;
    return steiner::heuristic_from_string(name);
}

int run(int argc, char** argv) {
    CLI::App app{"Steiner tree toolkit: generators, exact and approximate solvers, "
                 "model training and benchmarks"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a dataset of random instances");
    std::string gen_model = "erdos-renyi";
    int gen_n = 20;
    int gen_count = 10;
    int gen_terminals = 10;
    std::vector<double> gen_fractions;
    bool gen_weighted = false;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--model", gen_model,
                    "erdos-renyi, watts-strogatz, barabasi-albert or geometric")
        ->capture_default_str();
    gen->add_option("--n", gen_n, "Nodes per instance")->capture_default_str();
    gen->add_option("--count", gen_count, "Number of instances")->capture_default_str();
    gen->add_option("--terminals", gen_terminals, "Terminals per instance")
        ->capture_default_str();
    gen->add_option("--terminal-fraction", gen_fractions,
                    "Terminal counts as fractions of n, cycled across the dataset "
                    "(overrides --terminals)");
    gen->add_flag("--weighted", gen_weighted, "Integer weights in 1..10 instead of unit");
    gen->add_option("--seed", gen_seed, "Base seed")->capture_default_str();
    gen->add_option("--out-dir", gen_out, "Dataset directory to write")->required();

    // solve-exact
    auto* exact = app.add_subcommand("solve-exact", "Optimal tree by terminal-subset DP");
    std::string exact_in, exact_out;
    int exact_limit = 14;
    exact->add_option("--instance", exact_in, "Instance file (.json or .stp)")->required();
    exact->add_option("--terminal-limit", exact_limit, "Refuse more terminals than this")
        ->capture_default_str();
    exact->add_option("--out", exact_out, "Solution JSON path (default stdout)");

    // solve-2approx
    auto* approx = app.add_subcommand("solve-2approx", "Metric-closure 2-approximation");
    std::string approx_in, approx_out;
    approx->add_option("--instance", approx_in, "Instance file (.json or .stp)")->required();
    approx->add_option("--out", approx_out, "Solution JSON path (default stdout)");

    // solve-mcts
    auto* mcts = app.add_subcommand("solve-mcts", "Prior-guided tree search");
    std::string mcts_in, mcts_ckpt, mcts_out;
    std::string mcts_heuristic = "auto";
    int mcts_sims = 0;
    std::uint64_t mcts_seed = 0;
    bool mcts_trace = false;
    mcts->add_option("--instance", mcts_in, "Instance file (.json or .stp)")->required();
    mcts->add_option("--checkpoint", mcts_ckpt, "Model checkpoint")->required();
    mcts->add_option("--heuristic", mcts_heuristic, "auto, mst or metric-closure")
        ->capture_default_str();
    mcts->add_option("--simulations", mcts_sims, "Simulations per move (0: by node count)")
        ->capture_default_str();
    mcts->add_option("--seed", mcts_seed, "Recorded in the output; the search is deterministic")
        ->capture_default_str();
    mcts->add_flag("--trace", mcts_trace, "Include per-move search statistics");
    mcts->add_option("--out", mcts_out, "Solution JSON path (default stdout)");

    // make-training-data
    auto* mkdata = app.add_subcommand(
        "make-training-data", "Expand optimal solutions into supervised selection samples");
    std::string mkdata_manifest, mkdata_out;
    int mkdata_k = 20;
    std::uint64_t mkdata_seed = 0;
    int mkdata_limit = 14;
    mkdata->add_option("--manifest", mkdata_manifest, "Dataset manifest.json")->required();
    mkdata->add_option("--k", mkdata_k, "Orderings per instance")->capture_default_str();
    mkdata->add_option("--seed", mkdata_seed, "Ordering seed")->capture_default_str();
    mkdata->add_option("--terminal-limit", mkdata_limit, "Exact solver terminal limit")
        ->capture_default_str();
    mkdata->add_option("--out", mkdata_out, "Samples JSONL path")->required();

    // train
    auto* train = app.add_subcommand("train", "Train a selection model on expanded samples");
    std::string train_manifest, train_samples, train_out;
    int train_epochs = 200;
    int train_patience = 15;
    double train_lr = 1e-3;
    std::uint64_t train_seed = 0;
    int train_embed = 128;
    int train_edge = 128;
    int train_layers = 2;
    train->add_option("--manifest", train_manifest, "Dataset manifest.json")->required();
    train->add_option("--samples", train_samples, "Samples JSONL from make-training-data")
        ->required();
    train->add_option("--epochs", train_epochs, "Epoch cap")->capture_default_str();
    train->add_option("--patience", train_patience, "Early-stopping patience on validation loss")
        ->capture_default_str();
    train->add_option("--lr", train_lr, "ADAM learning rate")->capture_default_str();
    train->add_option("--seed", train_seed, "Init and shuffle seed")->capture_default_str();
    train->add_option("--embed-dim", train_embed, "Node embedding width")->capture_default_str();
    train->add_option("--edge-dim", train_edge, "Edge embedding width")->capture_default_str();
    train->add_option("--layers", train_layers, "Message-passing rounds")->capture_default_str();
    train->add_option("--out-checkpoint", train_out, "Checkpoint path for the best epoch")
        ->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Run all solvers over a dataset and report");
    std::string bench_manifest, bench_ckpt, bench_profile, bench_out;
    std::string bench_heuristic = "auto";
    int bench_sims = -1;
    int bench_max = -1;
    int bench_limit = -1;
    int bench_jobs = 0;
    std::uint64_t bench_seed = 0;
    bool bench_svg = false;
    bool bench_zero = false;
    bench->add_option("--manifest", bench_manifest, "Dataset manifest.json")->required();
    bench->add_option("--checkpoint", bench_ckpt, "Model checkpoint")->required();
    bench->add_option("--profile", bench_profile, "smoke, paper-mini or runtime-50w");
    bench->add_option("--simulations", bench_sims, "Simulations per move (0: by node count)");
    bench->add_option("--max-instances", bench_max, "Cap on instances (0: all)");
    bench->add_option("--exact-limit", bench_limit, "Exact solver terminal limit");
    bench->add_option("--heuristic", bench_heuristic, "auto, mst or metric-closure")
        ->capture_default_str();
    bench->add_option("--jobs", bench_jobs, "Worker threads (0: keep profile/default)");
    bench->add_option("--seed", bench_seed, "Recorded in the report")->capture_default_str();
    bench->add_flag("--svg", bench_svg, "Also write a cost scatter plot");
    bench->add_flag("--zero-timings", bench_zero,
                    "Zero the timing columns for byte-stable output");
    bench->add_option("--out-dir", bench_out, "Report directory")->required();

    // convert
    auto* convert = app.add_subcommand("convert", "Convert between STP and instance JSON");
    std::string convert_in, convert_out;
    convert->add_option("--in", convert_in, "Input file (.json or .stp)")->required();
    convert->add_option("--out", convert_out, "Output file (.json or .stp)")->required();

    CLI11_PARSE(app, argc, argv);

    if (*gen) {
        steiner::Dataset dataset =
            steiner::make_dataset(steiner::graph_model_from_string(gen_model), gen_n, gen_count,
                                  terminal_spec(gen_terminals, gen_fractions), gen_weighted,
                                  gen_seed);
        const std::string manifest = steiner::write_dataset(dataset, gen_out);
        std::cout << manifest << '\n';
        std::cerr << "wrote " << dataset.instances.size() << " instances under " << gen_out
                  << '\n';
    } else if (*exact) {
        const SteinerInstance instance = load_instance(exact_in);
        const auto start = std::chrono::steady_clock::now();
        const SteinerTree tree = steiner::exact_solve(instance, {exact_limit});
        emit_solution(instance, tree, elapsed_ms(start), exact_out);
    } else if (*approx) {
        const SteinerInstance instance = load_instance(approx_in);
        const auto start = std::chrono::steady_clock::now();
        const SteinerTree tree = steiner::two_approximation(instance);
        emit_solution(instance, tree, elapsed_ms(start), approx_out);
    } else if (*mcts) {
        const SteinerInstance instance = load_instance(mcts_in);
        const steiner::gnn::GnnModel model = steiner::gnn::load_checkpoint_file(mcts_ckpt);
        steiner::SearchConfig config;
        config.heuristic =
            heuristic_choice(mcts_heuristic).value_or(steiner::default_heuristic(instance));
        config.simulations =
            mcts_sims > 0 ? mcts_sims : steiner::default_simulations(instance.node_count());
        config.collect_trace = mcts_trace;
        const auto start = std::chrono::steady_clock::now();
        const steiner::SearchResult result = steiner::run_search(instance, model, config);
        const double ms = elapsed_ms(start);
        check_tree(instance, result.tree);

        nlohmann::ordered_json out;
        out["cost"] = result.tree.cost;
        auto edges = nlohmann::ordered_json::array();
        for (const auto& e : result.tree.edges) edges.push_back({e.u, e.v});
        out["edges"] = edges;
        out["runtime_ms"] = ms;
        out["search_cost"] = result.search_cost;
        out["fallback_cost"] = result.fallback_cost;
        out["fallback_used"] = result.fallback_used;
        out["selection"] = result.selection;
        out["heuristic"] = steiner::to_string(config.heuristic);
        out["simulations"] = config.simulations;
        out["seed"] = mcts_seed;
        if (mcts_trace) {
            auto trace = nlohmann::ordered_json::array();
            for (const auto& move : result.trace) {
                trace.push_back({{"played", move.played},
                                 {"edge_visits", move.edge_visits},
                                 {"best_reward", move.best_reward},
                                 {"total_child_visits", move.total_child_visits}});
            }
            out["trace"] = trace;
        }
        emit(out.dump(2) + "\n", mcts_out);
        std::cerr << instance.id() << ": cost " << result.tree.cost << " (search "
                  << result.search_cost << ", fallback " << result.fallback_cost << ", " << ms
                  << " ms)\n";
    } else if (*mkdata) {
        const std::vector<SteinerInstance> instances =
            steiner::load_manifest_instances(mkdata_manifest);
        const std::vector<steiner::TrainingSample> samples =
            steiner::build_training_samples(instances, mkdata_k, mkdata_seed, {mkdata_limit});
        steiner::write_text_file(mkdata_out, steiner::samples_to_jsonl(samples));
        std::cerr << "wrote " << samples.size() << " samples from " << instances.size()
                  << " instances to " << mkdata_out << '\n';
    } else if (*train) {
        const std::vector<SteinerInstance> instances =
            steiner::load_manifest_instances(train_manifest);
        const std::vector<steiner::TrainingSample> samples =
            steiner::samples_from_jsonl(steiner::read_text_file(train_samples));
        steiner::gnn::ModelConfig config;
        config.embed_dim = train_embed;
        config.edge_dim = train_edge;
        config.layers = train_layers;
        config.learning_rate = train_lr;
        config.patience = train_patience;
        steiner::gnn::GnnModel model(config, train_seed);
        steiner::TrainOptions options;
        options.max_epochs = train_epochs;
        options.patience = train_patience;
        options.learning_rate = train_lr;
        options.seed = train_seed;
        const steiner::TrainResult result = steiner::train(model, instances, samples, options);
        steiner::gnn::save_checkpoint_file(result.model, train_out);
        for (const auto& stats : result.history) {
            std::cerr << "epoch " << stats.epoch << ": train " << stats.train_loss << ", val "
                      << stats.val_loss << '\n';
        }
        std::cout << "best epoch " << result.best_epoch << " val loss " << result.best_val_loss
                  << " after " << result.epochs_run << " epochs; checkpoint " << train_out
                  << '\n';
    } else if (*bench) {
        steiner::BenchConfig config;
        if (!bench_profile.empty()) config = steiner::profile_config(bench_profile);
        if (bench_sims >= 0) config.simulations = bench_sims;
        if (bench_max >= 0) config.max_instances = bench_max;
        if (bench_limit >= 0) config.exact_terminal_limit = bench_limit;
        if (auto h = heuristic_choice(bench_heuristic)) config.heuristic = h;
        if (bench_jobs > 0) config.jobs = bench_jobs;
        config.seed = bench_seed;
        config.zero_timings = config.zero_timings || bench_zero;
        config.svg = config.svg || bench_svg;

        const std::vector<SteinerInstance> instances =
            steiner::load_manifest_instances(bench_manifest);
        const steiner::gnn::GnnModel model = steiner::gnn::load_checkpoint_file(bench_ckpt);
        const std::vector<steiner::ExperimentResult> results =
            steiner::run_experiment(instances, model, config);
        steiner::emit_report(results, bench_out, config.svg);
        const steiner::Summary summary = steiner::summarize(results);
        std::cout << "rows " << summary.rows << ", with optimum " << summary.rows_with_opt
                  << ", mean search/optimum "
                  << (summary.rows_with_opt > 0 ? summary.mean_mcts_over_opt : 0.0)
                  << ", report in " << bench_out << '\n';
    } else if (*convert) {
        const SteinerInstance instance = load_instance(convert_in);
        if (has_extension(convert_out, ".stp")) {
            steiner::write_text_file(convert_out, steiner::serialize_stp(instance));
        } else if (has_extension(convert_out, ".json")) {
            steiner::write_text_file(convert_out, steiner::instance_to_json(instance));
        } else {
            throw std::runtime_error("convert output must end in .json or .stp: " + convert_out);
        }
        std::cerr << "wrote " << convert_out << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
