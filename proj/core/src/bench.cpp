#include "steiner/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "steiner/approx.hpp"
#include "steiner/exact.hpp"
#include "steiner/gnn/checkpoint.hpp"
#include "steiner/json_io.hpp"

namespace steiner {

namespace {

namespace fs = std::filesystem;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    const auto d = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double, std::milli>(d).count();
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_ms(double ms) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", ms);
    return buf;
}

ExperimentResult run_one(const SteinerInstance& instance, const gnn::GnnModel& model,
                         const BenchConfig& config, const std::string& fingerprint) {
    ExperimentResult row;
    row.instance_id = instance.id();
    row.seed = config.seed;
    row.fingerprint = fingerprint;

    if (instance.terminal_count() <= config.exact_terminal_limit) {
        ExactConfig exact_config;
        exact_config.terminal_limit = config.exact_terminal_limit;
        const auto start = std::chrono::steady_clock::now();
        row.opt = exact_solve(instance, exact_config).cost;
        row.t_opt_ms = elapsed_ms(start);
    }

    {
        const auto start = std::chrono::steady_clock::now();
        row.approx = two_approximation(instance).cost;
        row.t_approx_ms = elapsed_ms(start);
    }

    SearchConfig search;
    search.heuristic =
        config.heuristic ? *config.heuristic : default_heuristic(instance);
    search.simulations = config.simulations > 0 ? config.simulations
                                                : default_simulations(instance.node_count());
    row.heuristic = to_string(search.heuristic);
    row.simulations = search.simulations;
    {
        const auto start = std::chrono::steady_clock::now();
        row.mcts = run_search(instance, model, search).tree.cost;
        row.t_mcts_ms = elapsed_ms(start);
    }

    if (config.zero_timings) row.t_opt_ms = row.t_approx_ms = row.t_mcts_ms = 0.0;

    if (row.opt) {
        const Cost opt = *row.opt;
        if (!(opt <= row.mcts && row.mcts <= row.approx && row.approx <= 2 * opt)) {
            throw BenchError("cost ordering violated on " + row.instance_id + ": opt " +
                             std::to_string(opt) + ", mcts " + std::to_string(row.mcts) +
                             ", approx " + std::to_string(row.approx));
        }
    }
    return row;
}

}  // namespace

std::string write_dataset(const Dataset& dataset, const std::string& dir) {
    fs::create_directories(fs::path(dir) / "instances");
    nlohmann::ordered_json manifest;
    manifest["model"] = to_string(dataset.model);
    manifest["n"] = dataset.n;
    manifest["weighted"] = dataset.weighted;
    manifest["seed"] = dataset.base_seed;
    manifest["instances"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
        const auto& inst = dataset.instances[i];
        const std::string file = "instances/" + inst.id() + ".json";
        write_text_file((fs::path(dir) / file).string(), instance_to_json(inst));
        nlohmann::ordered_json entry;
        entry["id"] = inst.id();
        entry["file"] = file;
        entry["terminal_count"] = inst.terminal_count();
        entry["seed"] = dataset.configs[i].seed;
        manifest["instances"].push_back(entry);
    }
    const std::string path = (fs::path(dir) / "manifest.json").string();
    write_text_file(path, manifest.dump(2) + "\n");
    return path;
}

Manifest read_manifest(const std::string& path) {
    Manifest m;
    try {
        const auto j = nlohmann::json::parse(read_text_file(path));
        m.model = j.at("model").get<std::string>();
        m.n = j.at("n").get<int>();
        m.weighted = j.at("weighted").get<bool>();
        m.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& e : j.at("instances")) {
            ManifestEntry entry;
            entry.id = e.at("id").get<std::string>();
            entry.file = e.at("file").get<std::string>();
            entry.terminal_count = e.at("terminal_count").get<int>();
            entry.seed = e.at("seed").get<std::uint64_t>();
            m.entries.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw BenchError("bad manifest " + path + ": " + e.what());
    }
    return m;
}

std::vector<SteinerInstance> load_manifest_instances(const std::string& manifest_path) {
    const Manifest m = read_manifest(manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();
    std::vector<SteinerInstance> instances;
    for (const auto& e : m.entries) {
        instances.push_back(instance_from_json(read_text_file((base / e.file).string())));
        if (instances.back().id() != e.id) {
            throw BenchError("manifest entry " + e.id + " points at instance " +
                             instances.back().id());
        }
    }
    return instances;
}

BenchConfig profile_config(const std::string& name) {
    BenchConfig config;
    if (name == "smoke") {
        config.simulations = 50;
        config.max_instances = 10;
    } else if (name == "paper-mini") {
        config.simulations = 800;
        config.max_instances = 40;
    } else if (name == "runtime-50w") {
        config.simulations = 800;
        config.max_instances = 5;
        config.exact_terminal_limit = 20;
    } else {
        throw BenchError("unknown profile: " + name + " (smoke, paper-mini, runtime-50w)");
    }
    return config;
}

std::vector<ExperimentResult> run_experiment(const std::vector<SteinerInstance>& instances,
                                             const gnn::GnnModel& model,
                                             const BenchConfig& config) {
    std::vector<const SteinerInstance*> work;
    for (const auto& inst : instances) work.push_back(&inst);
    std::sort(work.begin(), work.end(),
              [](const SteinerInstance* a, const SteinerInstance* b) { return a->id() < b->id(); });
    if (config.max_instances > 0 &&
        static_cast<int>(work.size()) > config.max_instances) {
        work.resize(static_cast<std::size_t>(config.max_instances));
    }

    // The fingerprint ties every row to the exact model and settings.
    std::string fp_text = save_checkpoint(model);
    fp_text += ";sims=" + std::to_string(config.simulations);
    fp_text += ";limit=" + std::to_string(config.exact_terminal_limit);
    fp_text += ";heuristic=" + (config.heuristic ? to_string(*config.heuristic) : "auto");
    fp_text += ";seed=" + std::to_string(config.seed);
    const std::string fingerprint = fnv1a_hex(fp_text);

    int jobs = config.jobs;
    if (const char* env = std::getenv("STEINER_BENCH_JOBS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) jobs = parsed;
    }
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(work.size() ? work.size() : 1)));

    std::vector<ExperimentResult> results(work.size());
    if (jobs == 1) {
        for (std::size_t i = 0; i < work.size(); ++i) {
            results[i] = run_one(*work[i], model, config, fingerprint);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::string error;
        std::mutex error_mutex;
        auto worker = [&]() {
            while (!failed.load()) {
                const std::size_t i = next.fetch_add(1);
                if (i >= work.size()) break;
                try {
                    results[i] = run_one(*work[i], model, config, fingerprint);
                } catch (const std::exception& e) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    failed.store(true);
                    if (error.empty()) error = e.what();
                }
            }
        };
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
        if (failed.load()) throw BenchError(error);
    }
    return results;  // already in id order
}

Summary summarize(const std::vector<ExperimentResult>& results) {
    Summary s;
    s.rows = static_cast<int>(results.size());
    double mcts_opt = 0.0;
    double approx_opt = 0.0;
    double mcts_approx = 0.0;
    for (const auto& r : results) {
        if (r.mcts < r.approx) ++s.mcts_wins_vs_approx;
        if (r.approx > 0) mcts_approx += static_cast<double>(r.mcts) / static_cast<double>(r.approx);
        s.mean_t_opt_ms += r.t_opt_ms;
        s.mean_t_approx_ms += r.t_approx_ms;
        s.mean_t_mcts_ms += r.t_mcts_ms;
        if (!r.opt) continue;
        ++s.rows_with_opt;
        const double opt = static_cast<double>(*r.opt);
        if (opt > 0) {
            mcts_opt += static_cast<double>(r.mcts) / opt;
            approx_opt += static_cast<double>(r.approx) / opt;
        }
        if (r.mcts == *r.opt) ++s.mcts_optimal;
        if (r.approx > *r.opt) ++s.approx_suboptimal;
    }
    if (s.rows > 0) {
        s.mean_mcts_over_approx = mcts_approx / s.rows;
        s.mean_t_opt_ms /= s.rows;
        s.mean_t_approx_ms /= s.rows;
        s.mean_t_mcts_ms /= s.rows;
    }
    if (s.rows_with_opt > 0) {
        s.mean_mcts_over_opt = mcts_opt / s.rows_with_opt;
        s.mean_approx_over_opt = approx_opt / s.rows_with_opt;
    }
    return s;
}

std::string results_to_csv(const std::vector<ExperimentResult>& results) {
    std::string out = "instance_id,opt,approx,mcts,t_opt_ms,t_approx_ms,t_mcts_ms\n";
    for (const auto& r : results) {
        out += r.instance_id;
        out += ',';
        if (r.opt) out += std::to_string(*r.opt);
        out += ',';
        out += std::to_string(r.approx);
        out += ',';
        out += std::to_string(r.mcts);
        out += ',';
        out += format_ms(r.t_opt_ms);
        out += ',';
        out += format_ms(r.t_approx_ms);
        out += ',';
        out += format_ms(r.t_mcts_ms);
        out += '\n';
    }
    return out;
}

std::string summary_to_json(const Summary& s, const std::vector<ExperimentResult>& results) {
    nlohmann::ordered_json j;
    j["rows"] = s.rows;
    j["rows_with_opt"] = s.rows_with_opt;
    j["mean_mcts_over_opt"] = s.mean_mcts_over_opt;
    j["mean_approx_over_opt"] = s.mean_approx_over_opt;
    j["mean_mcts_over_approx"] = s.mean_mcts_over_approx;
    j["mcts_wins_vs_approx"] = s.mcts_wins_vs_approx;
    j["mcts_optimal"] = s.mcts_optimal;
    j["approx_suboptimal"] = s.approx_suboptimal;
    j["mean_runtime_ms"] = {{"opt", s.mean_t_opt_ms},
                            {"approx", s.mean_t_approx_ms},
                            {"mcts", s.mean_t_mcts_ms}};
    if (!results.empty()) {
        j["fingerprint"] = results.front().fingerprint;
        j["simulations"] = results.front().simulations;
        j["heuristic"] = results.front().heuristic;
        j["seed"] = results.front().seed;
    }
    return j.dump(2) + "\n";
}

std::string results_to_svg(const std::vector<ExperimentResult>& results) {
    const int width = 640;
    const int height = 400;
    const int ml = 56;
    const int mr = 16;
    const int mt = 24;
    const int mb = 44;
    const int pw = width - ml - mr;
    const int ph = height - mt - mb;

    Cost max_cost = 1;
    for (const auto& r : results) {
        max_cost = std::max({max_cost, r.approx, r.mcts, r.opt ? *r.opt : Cost{0}});
    }
    const int count = static_cast<int>(results.size());
    auto px = [&](int i) {
        const double f = count <= 1 ? 0.5 : static_cast<double>(i) / (count - 1);
        return ml + f * pw;
    };
    auto py = [&](Cost c) {
        return mt + ph - static_cast<double>(c) / static_cast<double>(max_cost) * ph;
    };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt + ph) +
           "\" x2=\"" + std::to_string(ml + pw) + "\" y2=\"" + std::to_string(mt + ph) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt) + "\" x2=\"" +
           std::to_string(ml) + "\" y2=\"" + std::to_string(mt + ph) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + std::to_string(ml + pw / 2) + "\" y=\"" + std::to_string(height - 10) +
           "\" text-anchor=\"middle\" font-size=\"12\">instance</text>\n";
    svg += "<text x=\"14\" y=\"" + std::to_string(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 " +
           std::to_string(mt + ph / 2) + ")\">cost</text>\n";
    svg += "<text x=\"" + std::to_string(ml - 6) + "\" y=\"" + std::to_string(mt + ph + 4) +
           "\" text-anchor=\"end\" font-size=\"10\">0</text>\n";
    svg += "<text x=\"" + std::to_string(ml - 6) + "\" y=\"" + std::to_string(mt + 4) +
           "\" text-anchor=\"end\" font-size=\"10\">" + std::to_string(max_cost) + "</text>\n";

    struct Series {
        const char* name;
        const char* color;
    };
    const Series series[3] = {{"opt", "#2a6fbb"}, {"approx", "#d2722e"}, {"mcts", "#2f9e55"}};
    for (int k = 0; k < 3; ++k) {
        svg += "<circle cx=\"" + std::to_string(ml + 70 * k + 8) + "\" cy=\"12\" r=\"4\" fill=\"" +
               series[k].color + "\"/>\n";
        svg += "<text x=\"" + std::to_string(ml + 70 * k + 16) +
               "\" y=\"16\" font-size=\"11\">" + series[k].name + "</text>\n";
    }
    for (int i = 0; i < count; ++i) {
        const auto& r = results[static_cast<std::size_t>(i)];
        if (r.opt) {
            svg += "<circle cx=\"" + fmt(px(i)) + "\" cy=\"" + fmt(py(*r.opt)) +
                   "\" r=\"3.5\" fill=\"" + series[0].color + "\"/>\n";
        }
        svg += "<circle cx=\"" + fmt(px(i)) + "\" cy=\"" + fmt(py(r.approx)) +
               "\" r=\"3.5\" fill=\"" + series[1].color + "\"/>\n";
        svg += "<circle cx=\"" + fmt(px(i)) + "\" cy=\"" + fmt(py(r.mcts)) +
               "\" r=\"3.5\" fill=\"" + series[2].color + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_report(const std::vector<ExperimentResult>& results, const std::string& out_dir,
                 bool svg) {
    if (results.empty()) throw BenchError("no results to report");
    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / "results.csv").string(), results_to_csv(results));
    write_text_file((fs::path(out_dir) / "summary.json").string(),
                    summary_to_json(summarize(results), results));
    if (svg) {
        write_text_file((fs::path(out_dir) / "scatter.svg").string(), results_to_svg(results));
    }
}

}  // namespace steiner
