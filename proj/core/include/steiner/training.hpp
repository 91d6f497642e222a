#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steiner/exact.hpp"
#include "steiner/gnn/model.hpp"
#include "steiner/instance.hpp"

namespace steiner {

class TrainingError : public std::runtime_error {
public:
    explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

// One supervised step: given the ordered partial selection (terminals first,
// then previously added Steiner nodes), the model should pick `truth`.
struct TrainingSample {
    std::string instance_id;
    std::vector<NodeId> partial;
    NodeId truth = -1;
};

// Prefix samples from random orderings of the optimal tree's Steiner nodes:
// each of k permutations yields one sample per prefix position. When the
// Steiner node count m satisfies m! <= k, all m! orderings are enumerated
// instead of sampling duplicates.
std::vector<TrainingSample> expand_permutations(const SteinerInstance& instance,
                                                const SteinerTree& optimal, int k,
                                                std::uint64_t seed);

// Solves every instance exactly and expands permutations; per-instance seeds
// derive from `seed`.
std::vector<TrainingSample> build_training_samples(const std::vector<SteinerInstance>& instances,
                                                   int k, std::uint64_t seed,
                                                   const ExactConfig& exact_config = {});

struct TrainOptions {
    int max_epochs = 200;
    int patience = 15;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct TrainResult {
    gnn::GnnModel model;  // parameters of the best validation epoch
    std::vector<EpochStats> history;
    int best_epoch = 0;
    double best_val_loss = 0.0;
    int epochs_run = 0;
};

// Minibatch ADAM with early stopping on validation loss. The validation
// split is 10% of the *instances* (at least one), so no prefix of a
// validation instance leaks into training. Aborts on non-finite loss.
TrainResult train(gnn::GnnModel model, const std::vector<SteinerInstance>& instances,
                  const std::vector<TrainingSample>& samples, const TrainOptions& options);

struct AccuracyReport {
    double top1_accuracy = 0.0;      // argmax over legal nodes hits truth
    double uniform_baseline = 0.0;   // mean of 1/|legal|
    int sample_count = 0;
};

AccuracyReport evaluate_top1(const gnn::GnnModel& model,
                             const std::vector<SteinerInstance>& instances,
                             const std::vector<TrainingSample>& samples);

// JSON-lines persistence, one sample per line.
std::string samples_to_jsonl(const std::vector<TrainingSample>& samples);
std::vector<TrainingSample> samples_from_jsonl(const std::string& text);

}  // namespace steiner
