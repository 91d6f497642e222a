#include "steiner/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "steiner/rng.hpp"

namespace steiner {

namespace {

std::vector<NodeId> steiner_nodes_of(const SteinerInstance& instance, const SteinerTree& tree) {
    std::vector<NodeId> result;
    for (const NodeId v : tree.nodes()) {
        if (!instance.is_terminal(v)) result.push_back(v);
    }
    return result;  // tree.nodes() is sorted
}

std::map<std::string, const SteinerInstance*> index_by_id(
    const std::vector<SteinerInstance>& instances) {
    std::map<std::string, const SteinerInstance*> byid;
    for (const auto& inst : instances) byid[inst.id()] = &inst;
    return byid;
}

const SteinerInstance& instance_for(const std::map<std::string, const SteinerInstance*>& byid,
                                    const std::string& id) {
    const auto it = byid.find(id);
    if (it == byid.end()) throw TrainingError("sample references unknown instance " + id);
    return *it->second;
}

std::uint64_t factorial_capped(int m, std::uint64_t cap) {
    std::uint64_t f = 1;
    for (int i = 2; i <= m; ++i) {
        f *= static_cast<std::uint64_t>(i);
        if (f > cap) return cap + 1;
    }
    return f;
}

void emit_prefixes(const SteinerInstance& instance, const std::vector<NodeId>& order,
                   std::vector<TrainingSample>& out) {
    std::vector<NodeId> partial(instance.terminals().begin(), instance.terminals().end());
    for (const NodeId next : order) {
        out.push_back({instance.id(), partial, next});
        partial.push_back(next);
    }
}

}  // namespace

std::vector<TrainingSample> expand_permutations(const SteinerInstance& instance,
                                                const SteinerTree& optimal, int k,
                                                std::uint64_t seed) {
    if (k < 1) throw TrainingError("permutation count must be at least 1");
    std::vector<NodeId> base = steiner_nodes_of(instance, optimal);
    const int m = static_cast<int>(base.size());
    std::vector<TrainingSample> samples;
    if (m == 0) return samples;

    if (factorial_capped(m, static_cast<std::uint64_t>(k)) <= static_cast<std::uint64_t>(k)) {
        // Few enough orderings to enumerate them all exactly once.
        std::vector<NodeId> perm = base;
        do {
            emit_prefixes(instance, perm, samples);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return samples;
    }

    Rng rng(seed);
    for (int i = 0; i < k; ++i) {
        std::vector<NodeId> perm = base;
        rng.shuffle(perm);
        emit_prefixes(instance, perm, samples);
    }
    return samples;
}

std::vector<TrainingSample> build_training_samples(const std::vector<SteinerInstance>& instances,
                                                   int k, std::uint64_t seed,
                                                   const ExactConfig& exact_config) {
    std::vector<TrainingSample> samples;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto tree = exact_solve(instances[i], exact_config);
        auto expanded =
            expand_permutations(instances[i], tree, k, mix_seed(seed, static_cast<std::uint64_t>(i)));
        samples.insert(samples.end(), expanded.begin(), expanded.end());
    }
    return samples;
}

TrainResult train(gnn::GnnModel model, const std::vector<SteinerInstance>& instances,
                  const std::vector<TrainingSample>& samples, const TrainOptions& options) {
    if (samples.empty()) throw TrainingError("no training samples");
    if (options.max_epochs < 1) throw TrainingError("max_epochs must be at least 1");
    const auto byid = index_by_id(instances);
    for (const auto& s : samples) instance_for(byid, s.instance_id);  // fail fast

    // Hold out 10% of the sample-contributing instances (at least one) for
    // validation; instances without samples only serve lookups.
    std::set<std::string> sampled_ids;
    for (const auto& s : samples) sampled_ids.insert(s.instance_id);
    std::vector<std::string> ids(sampled_ids.begin(), sampled_ids.end());
    Rng rng(mix_seed(options.seed, 0x5eed));
    rng.shuffle(ids);
    const std::size_t held = std::max<std::size_t>(1, ids.size() / 10);
    std::set<std::string> val_ids(ids.end() - static_cast<std::ptrdiff_t>(held), ids.end());
    if (val_ids.size() == ids.size()) throw TrainingError("need at least two instances to split");

    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> val_idx;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        (val_ids.count(samples[i].instance_id) ? val_idx : train_idx).push_back(i);
    }
    if (train_idx.empty() || val_idx.empty()) {
        throw TrainingError("instance split left an empty side");
    }

    const int batch_size = std::max(1, model.config().batch_size);
    TrainResult result{model, {}, 0, std::numeric_limits<double>::infinity(), 0};

    int since_best = 0;
    for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
        rng.shuffle(train_idx);
        double train_loss_sum = 0.0;
        for (std::size_t start = 0; start < train_idx.size();
             start += static_cast<std::size_t>(batch_size)) {
            const std::size_t end =
                std::min(train_idx.size(), start + static_cast<std::size_t>(batch_size));
            gnn::Gradients batch = model.zero_gradients();
            for (std::size_t i = start; i < end; ++i) {
                const auto& s = samples[train_idx[i]];
                const auto& inst = instance_for(byid, s.instance_id);
                auto one = model.loss_and_gradients(inst, s.partial, s.truth);
                if (!std::isfinite(one.loss)) {
                    throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) +
                                        ", instance " + s.instance_id);
                }
                train_loss_sum += one.loss;
                for (std::size_t t = 0; t < batch.tensors.size(); ++t) {
                    gnn::add_inplace(batch.tensors[t], one.grads.tensors[t]);
                }
            }
            const double inv = 1.0 / static_cast<double>(end - start);
            for (auto& t : batch.tensors) gnn::scale_inplace(t, inv);
            model.adam_step(batch, options.learning_rate);
        }

        double val_loss_sum = 0.0;
        for (const std::size_t i : val_idx) {
            const auto& s = samples[i];
            const auto& inst = instance_for(byid, s.instance_id);
            const auto flags = gnn::partial_flags(inst, s.partial);
            const auto probs = model.forward_eval(inst, flags);
            const double loss = -std::log(probs[static_cast<std::size_t>(s.truth)]);
            if (!std::isfinite(loss)) {
                throw TrainingError("non-finite validation loss at epoch " +
                                    std::to_string(epoch) + ", instance " + s.instance_id);
            }
            val_loss_sum += loss;
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = train_loss_sum / static_cast<double>(train_idx.size());
        stats.val_loss = val_loss_sum / static_cast<double>(val_idx.size());
        result.history.push_back(stats);
        result.epochs_run = epoch;

        if (stats.val_loss < result.best_val_loss) {
            result.best_val_loss = stats.val_loss;
            result.best_epoch = epoch;
            result.model = model;
            since_best = 0;
        } else if (++since_best >= options.patience) {
            break;
        }
    }
    return result;
}

AccuracyReport evaluate_top1(const gnn::GnnModel& model,
                             const std::vector<SteinerInstance>& instances,
                             const std::vector<TrainingSample>& samples) {
    const auto byid = index_by_id(instances);
    AccuracyReport report;
    int hits = 0;
    double baseline_sum = 0.0;
    for (const auto& s : samples) {
        const auto& inst = instance_for(byid, s.instance_id);
        const auto flags = gnn::partial_flags(inst, s.partial);
        std::vector<char> legal(flags.size());
        int legal_count = 0;
        for (std::size_t i = 0; i < flags.size(); ++i) {
            legal[i] = flags[i] ? 0 : 1;
            legal_count += legal[i];
        }
        if (legal_count == 0) throw TrainingError("sample has no legal action");
        const auto probs = model.forward_eval(inst, flags, &legal);
        NodeId best = -1;
        double best_p = -1.0;
        for (NodeId v = 0; v < inst.node_count(); ++v) {
            if (!legal[static_cast<std::size_t>(v)]) continue;
            if (probs[static_cast<std::size_t>(v)] > best_p) {
                best_p = probs[static_cast<std::size_t>(v)];
                best = v;
            }
        }
        hits += best == s.truth ? 1 : 0;
        baseline_sum += 1.0 / static_cast<double>(legal_count);
    }
    report.sample_count = static_cast<int>(samples.size());
    if (!samples.empty()) {
        report.top1_accuracy = static_cast<double>(hits) / static_cast<double>(samples.size());
        report.uniform_baseline = baseline_sum / static_cast<double>(samples.size());
    }
    return report;
}

std::string samples_to_jsonl(const std::vector<TrainingSample>& samples) {
    std::string out;
    for (const auto& s : samples) {
        nlohmann::ordered_json j;
        j["instance_id"] = s.instance_id;
        j["partial"] = s.partial;
        j["truth"] = s.truth;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<TrainingSample> samples_from_jsonl(const std::string& text) {
    std::vector<TrainingSample> samples;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            TrainingSample s;
            s.instance_id = j.at("instance_id").get<std::string>();
            s.partial = j.at("partial").get<std::vector<NodeId>>();
            s.truth = j.at("truth").get<NodeId>();
            samples.push_back(std::move(s));
        } catch (const nlohmann::json::exception& e) {
            throw TrainingError("bad sample on line " + std::to_string(line_no) + ": " +
                                e.what());
        }
    }
    return samples;
}

}  // namespace steiner
