#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "steiner/gnn/tensor.hpp"
#include "steiner/instance.hpp"

namespace steiner::gnn {

class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

struct ModelConfig {
    int input_dim = 4;    // feature tag: in_partial, is_terminal, x, y
    int embed_dim = 128;
    int edge_dim = 128;
    int layers = 2;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double bn_momentum = 0.9;
    double bn_eps = 1e-5;
    int batch_size = 32;
    int patience = 15;

    bool operator==(const ModelConfig&) const = default;
};

// One message-passing layer: the three aggregation matrices, the edge-weight
// embedding vector, and a two-sublayer MLP (dense, batch norm, ReLU twice).
// Dense sublayers carry no bias; the batch-norm shift plays that role.
struct LayerParams {
    Matrix theta1;     // embed x in
    Matrix theta2;     // embed x in
    Matrix theta3;     // embed x edge
    Matrix theta4;     // 1 x edge
    Matrix w1;         // embed x embed
    Matrix bn1_scale;  // 1 x embed
    Matrix bn1_shift;
    Matrix w2;
    Matrix bn2_scale;
    Matrix bn2_shift;
    Matrix bn1_mean;   // running statistics, used in eval mode
    Matrix bn1_var;
    Matrix bn2_mean;
    Matrix bn2_var;
};

struct LayerTrace {
    Matrix h_in;          // n x in
    Matrix neighbor_sum;  // n x in
    Matrix edge_sum;      // n x edge
    Matrix pre;           // n x embed, aggregation before the MLP
    Matrix z1, xhat1, y1, r1;
    Matrix z2, xhat2, y2;
    Matrix invstd1, invstd2;          // 1 x embed, train-mode batch stats
    Matrix batch_mean1, batch_var1;   // 1 x embed
    Matrix batch_mean2, batch_var2;
    Matrix edge_embed;                // distinct weights x edge
};

struct ForwardTrace {
    std::vector<LayerTrace> layers;
    Matrix h_final;
    std::vector<double> scores;
    std::vector<double> probs;
    std::vector<Weight> distinct_weights;       // ascending
    std::vector<std::vector<int>> weight_counts;  // n x distinct
};

struct ParamRef {
    std::string name;
    Matrix* tensor;
};

struct Gradients {
    std::vector<Matrix> tensors;  // parameter registry order
};

struct LossResult {
    double loss = 0.0;
    Gradients grads;
};

struct AdamState {
    std::vector<Matrix> m;  // parameter registry order
    std::vector<Matrix> v;
    std::int64_t step = 0;
};

// Message-passing model over a whole instance: per-node embeddings updated
// through `layers` rounds, summed per node and softmaxed into a selection
// distribution. All reductions whose order floating point could observe
// (neighbor sums, batch-norm statistics, softmax denominator) run in a
// canonical value-sorted order, which makes relabeled isomorphic inputs
// produce bitwise-identical outputs.
class GnnModel {
public:
    GnnModel(const ModelConfig& config, std::uint64_t seed);

    const ModelConfig& config() const { return config_; }
    std::uint64_t init_seed() const { return init_seed_; }

    // Train mode: batch-norm uses the batch statistics and the running
    // statistics are updated in place.
    std::vector<double> forward_train(const SteinerInstance& instance,
                                      const std::vector<char>& in_partial, ForwardTrace& trace);

    // Eval mode: batch-norm uses running statistics; read-only, safe to call
    // concurrently. `legal` restricts the softmax support (masked nodes get
    // probability 0); null means all nodes.
    std::vector<double> forward_eval(const SteinerInstance& instance,
                                     const std::vector<char>& in_partial,
                                     const std::vector<char>* legal = nullptr) const;

    // Train-mode forward plus analytic backward. `partial` lists the nodes
    // already selected (terminals are implied); `truth` is the node the
    // sample says to add next.
    LossResult loss_and_gradients(const SteinerInstance& instance,
                                  const std::vector<NodeId>& partial, NodeId truth);

    // Standard bias-corrected update from the accumulated moments.
    void adam_step(const Gradients& grads, double lr);

    // Trainable tensors, fixed order; gradients, moments, checkpoints and
    // finite-difference checks all align with this order.
    std::vector<ParamRef> parameters();
    std::vector<ParamRef> running_stats();
    Gradients zero_gradients() const;

    AdamState& adam_state() { return adam_; }
    const AdamState& adam_state() const { return adam_; }
    const std::vector<LayerParams>& layer_params() const { return layers_; }

private:
    friend GnnModel model_for_checkpoint(const ModelConfig&, std::uint64_t);
    GnnModel() = default;

    std::vector<double> run_forward(const SteinerInstance& instance,
                                    const std::vector<char>& in_partial, bool train_mode,
                                    const std::vector<char>* legal, ForwardTrace* trace) const;
    void update_running_stats(const ForwardTrace& trace);

    ModelConfig config_;
    std::uint64_t init_seed_ = 0;
    std::vector<LayerParams> layers_;
    AdamState adam_;
};

// Zero-filled model used by the checkpoint loader.
GnnModel model_for_checkpoint(const ModelConfig& config, std::uint64_t init_seed);

// Feature tags for a forward pass: [in partial, terminal, x, y] per node.
Matrix build_features(const SteinerInstance& instance, const std::vector<char>& in_partial);

std::vector<char> partial_flags(const SteinerInstance& instance,
                                const std::vector<NodeId>& partial);

}  // namespace steiner::gnn
