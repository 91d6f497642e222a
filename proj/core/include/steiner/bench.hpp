#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "steiner/generators.hpp"
#include "steiner/gnn/model.hpp"
#include "steiner/instance.hpp"
#include "steiner/mcts.hpp"

namespace steiner {

class BenchError : public GraphError {
public:
    explicit BenchError(const std::string& what) : GraphError(what) {}
};

// Dataset directory layout: manifest.json next to an instances/ directory
// with one JSON file per instance.
struct ManifestEntry {
    std::string id;
    std::string file;  // relative to the manifest's directory
    int terminal_count = 0;
    std::uint64_t seed = 0;
};

struct Manifest {
    std::string model;
    int n = 0;
    bool weighted = false;
    std::uint64_t seed = 0;
    std::vector<ManifestEntry> entries;
};

std::string write_dataset(const Dataset& dataset, const std::string& dir);  // returns manifest path
Manifest read_manifest(const std::string& path);
std::vector<SteinerInstance> load_manifest_instances(const std::string& manifest_path);

struct BenchConfig {
    int simulations = 0;          // 0: by node count (800 / 1200)
    int max_instances = 0;        // 0: whole dataset
    int exact_terminal_limit = 14;
    std::optional<Heuristic> heuristic;  // unset: per-instance default
    std::uint64_t seed = 0;
    int jobs = 1;
    bool zero_timings = false;  // report 0 in timing columns; output becomes
                                // fully reproducible byte for byte
    bool svg = false;
};

// smoke: 10 instances, 50 simulations. paper-mini: 40 instances, 800
// simulations. runtime-50w: 5 instances, 800 simulations, exact limit
// raised to 20 for the runtime comparison on 50-node weighted graphs.
BenchConfig profile_config(const std::string& name);

struct ExperimentResult {
    std::string instance_id;
    std::optional<Cost> opt;
    Cost approx = 0;
    Cost mcts = 0;
    double t_opt_ms = 0.0;
    double t_approx_ms = 0.0;
    double t_mcts_ms = 0.0;
    std::string heuristic;
    int simulations = 0;
    std::uint64_t seed = 0;
    std::string fingerprint;
};

// Runs all three solvers per instance (the exact one only within its
// terminal limit) and enforces opt <= mcts <= approx <= 2 opt on every row
// that has an optimum. Rows come back sorted by instance id regardless of
// worker count.
std::vector<ExperimentResult> run_experiment(const std::vector<SteinerInstance>& instances,
                                             const gnn::GnnModel& model,
                                             const BenchConfig& config);

struct Summary {
    int rows = 0;
    int rows_with_opt = 0;
    double mean_mcts_over_opt = 0.0;
    double mean_approx_over_opt = 0.0;
    double mean_mcts_over_approx = 0.0;
    int mcts_wins_vs_approx = 0;    // strictly cheaper than the 2-approximation
    int mcts_optimal = 0;           // equal to the optimum
    int approx_suboptimal = 0;      // 2-approximation strictly above optimum
    double mean_t_opt_ms = 0.0;
    double mean_t_approx_ms = 0.0;
    double mean_t_mcts_ms = 0.0;
};

Summary summarize(const std::vector<ExperimentResult>& results);

std::string results_to_csv(const std::vector<ExperimentResult>& results);
std::string summary_to_json(const Summary& summary, const std::vector<ExperimentResult>& results);
std::string results_to_svg(const std::vector<ExperimentResult>& results);

// Writes results.csv, summary.json and optionally scatter.svg under out_dir.
void emit_report(const std::vector<ExperimentResult>& results, const std::string& out_dir,
                 bool svg);

}  // namespace steiner
