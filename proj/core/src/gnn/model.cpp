#include "steiner/gnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "steiner/rng.hpp"

namespace steiner::gnn {

namespace {

constexpr int kParamsPerLayer = 10;
enum ParamOffset {
    kTheta1 = 0,
    kTheta2,
    kTheta3,
    kTheta4,
    kW1,
    kBn1Scale,
    kBn1Shift,
    kW2,
    kBn2Scale,
    kBn2Shift,
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Ascending-value summation; the order depends only on the multiset of
// values, so relabeling the nodes cannot change the result.
double sorted_sum(std::vector<double>& buf) {
    std::sort(buf.begin(), buf.end());
    double s = 0.0;
    for (const double v : buf) s += v;
    return s;
}

void xavier_fill(Matrix& m, int fan_in, int fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& v : m.data) v = rng.uniform_real(-limit, limit);
}

// Batch norm over the node dimension; biased variance, statistics summed in
// value-sorted order.
void batch_norm_train(const Matrix& z, const Matrix& scale, const Matrix& shift, double eps,
                      Matrix& xhat, Matrix& y, Matrix& invstd, Matrix& mean_out,
                      Matrix& var_out) {
    const int n = z.rows;
    const int d = z.cols;
    xhat = Matrix(n, d);
    y = Matrix(n, d);
    invstd = Matrix(1, d);
    mean_out = Matrix(1, d);
    var_out = Matrix(1, d);
    std::vector<double> buf(static_cast<std::size_t>(n));
    for (int c = 0; c < d; ++c) {
        for (int u = 0; u < n; ++u) buf[static_cast<std::size_t>(u)] = z.at(u, c);
        const double mean = sorted_sum(buf) / n;
        // buf is sorted by value; reuse that order for the deviation sum.
        double var_acc = 0.0;
        for (const double v : buf) var_acc += (v - mean) * (v - mean);
        const double var = var_acc / n;
        const double is = 1.0 / std::sqrt(var + eps);
        mean_out.at(0, c) = mean;
        var_out.at(0, c) = var;
        invstd.at(0, c) = is;
        for (int u = 0; u < n; ++u) {
            const double xh = (z.at(u, c) - mean) * is;
            xhat.at(u, c) = xh;
            y.at(u, c) = scale.at(0, c) * xh + shift.at(0, c);
        }
    }
}

void batch_norm_eval(const Matrix& z, const Matrix& scale, const Matrix& shift,
                     const Matrix& run_mean, const Matrix& run_var, double eps, Matrix& y) {
    y = Matrix(z.rows, z.cols);
    for (int c = 0; c < z.cols; ++c) {
        const double is = 1.0 / std::sqrt(run_var.at(0, c) + eps);
        const double mean = run_mean.at(0, c);
        for (int u = 0; u < z.rows; ++u) {
            y.at(u, c) = scale.at(0, c) * (z.at(u, c) - mean) * is + shift.at(0, c);
        }
    }
}

Matrix relu(const Matrix& y) {
    Matrix r = y;
    for (double& v : r.data) v = std::max(0.0, v);
    return r;
}

void backward_batch_norm(const Matrix& g_y, const Matrix& xhat, const Matrix& invstd,
                         const Matrix& scale, Matrix& g_z, Matrix& grad_scale,
                         Matrix& grad_shift) {
    const int n = g_y.rows;
    const int d = g_y.cols;
    g_z = Matrix(n, d);
    for (int c = 0; c < d; ++c) {
        double sg = 0.0;
        double sgx = 0.0;
        for (int u = 0; u < n; ++u) {
            sg += g_y.at(u, c);
            sgx += g_y.at(u, c) * xhat.at(u, c);
        }
        grad_scale.at(0, c) += sgx;
        grad_shift.at(0, c) += sg;
        const double k = scale.at(0, c) * invstd.at(0, c);
        for (int u = 0; u < n; ++u) {
            g_z.at(u, c) =
                k * (g_y.at(u, c) - sg / n - xhat.at(u, c) * (sgx / n));
        }
    }
}

}  // namespace

Matrix build_features(const SteinerInstance& instance, const std::vector<char>& in_partial) {
    const int n = instance.node_count();
    if (static_cast<int>(in_partial.size()) != n) {
        throw ModelError("partial-selection flag vector has wrong length");
    }
    Matrix f(n, 4);
    const auto& coords = instance.coords();
    for (NodeId u = 0; u < n; ++u) {
        f.at(u, 0) = in_partial[static_cast<std::size_t>(u)] ? 1.0 : 0.0;
        f.at(u, 1) = instance.is_terminal(u) ? 1.0 : 0.0;
        if (coords) {
            f.at(u, 2) = (*coords)[static_cast<std::size_t>(u)].x;
            f.at(u, 3) = (*coords)[static_cast<std::size_t>(u)].y;
        }
    }
    return f;
}

std::vector<char> partial_flags(const SteinerInstance& instance,
                                const std::vector<NodeId>& partial) {
    std::vector<char> flags(static_cast<std::size_t>(instance.node_count()), 0);
    for (const NodeId t : instance.terminals()) flags[static_cast<std::size_t>(t)] = 1;
    for (const NodeId v : partial) {
        if (v < 0 || v >= instance.node_count()) throw ModelError("partial node out of range");
        flags[static_cast<std::size_t>(v)] = 1;
    }
    return flags;
}

GnnModel::GnnModel(const ModelConfig& config, std::uint64_t seed)
    : config_(config), init_seed_(seed) {
    if (config.input_dim != 4) throw ModelError("feature tags are 4-dimensional");
    if (config.embed_dim < 1 || config.edge_dim < 1 || config.layers < 1) {
        throw ModelError("model dimensions must be positive");
    }
    Rng rng(seed);
    const int d = config.embed_dim;
    const int e = config.edge_dim;
    for (int l = 0; l < config.layers; ++l) {
        const int in = l == 0 ? config.input_dim : d;
        LayerParams p;
        p.theta1 = Matrix(d, in);
        p.theta2 = Matrix(d, in);
        p.theta3 = Matrix(d, e);
        p.theta4 = Matrix(1, e);
        p.w1 = Matrix(d, d);
        p.w2 = Matrix(d, d);
        p.bn1_scale = Matrix(1, d);
        p.bn1_shift = Matrix(1, d);
        p.bn2_scale = Matrix(1, d);
        p.bn2_shift = Matrix(1, d);
        p.bn1_mean = Matrix(1, d);
        p.bn1_var = Matrix(1, d);
        p.bn2_mean = Matrix(1, d);
        p.bn2_var = Matrix(1, d);
        xavier_fill(p.theta1, in, d, rng);
        xavier_fill(p.theta2, in, d, rng);
        xavier_fill(p.theta3, e, d, rng);
        xavier_fill(p.theta4, 1, e, rng);
        xavier_fill(p.w1, d, d, rng);
        xavier_fill(p.w2, d, d, rng);
        p.bn1_scale.fill(1.0);
        p.bn2_scale.fill(1.0);
        p.bn1_var.fill(1.0);
        p.bn2_var.fill(1.0);
        layers_.push_back(std::move(p));
    }
    adam_.step = 0;
    for (const auto& ref : parameters()) {
        adam_.m.emplace_back(ref.tensor->rows, ref.tensor->cols);
        adam_.v.emplace_back(ref.tensor->rows, ref.tensor->cols);
    }
}

GnnModel model_for_checkpoint(const ModelConfig& config, std::uint64_t init_seed) {
    GnnModel model(config, 0);
    model.init_seed_ = init_seed;
    for (const auto& ref : model.parameters()) ref.tensor->fill(0.0);
    for (const auto& ref : model.running_stats()) ref.tensor->fill(0.0);
    return model;
}

std::vector<ParamRef> GnnModel::parameters() {
    std::vector<ParamRef> refs;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const std::string prefix = "layer" + std::to_string(l) + ".";
        LayerParams& p = layers_[l];
        refs.push_back({prefix + "theta1", &p.theta1});
        refs.push_back({prefix + "theta2", &p.theta2});
        refs.push_back({prefix + "theta3", &p.theta3});
        refs.push_back({prefix + "theta4", &p.theta4});
        refs.push_back({prefix + "w1", &p.w1});
        refs.push_back({prefix + "bn1_scale", &p.bn1_scale});
        refs.push_back({prefix + "bn1_shift", &p.bn1_shift});
        refs.push_back({prefix + "w2", &p.w2});
        refs.push_back({prefix + "bn2_scale", &p.bn2_scale});
        refs.push_back({prefix + "bn2_shift", &p.bn2_shift});
    }
    return refs;
}

std::vector<ParamRef> GnnModel::running_stats() {
    std::vector<ParamRef> refs;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const std::string prefix = "layer" + std::to_string(l) + ".";
        LayerParams& p = layers_[l];
        refs.push_back({prefix + "bn1_mean", &p.bn1_mean});
        refs.push_back({prefix + "bn1_var", &p.bn1_var});
        refs.push_back({prefix + "bn2_mean", &p.bn2_mean});
        refs.push_back({prefix + "bn2_var", &p.bn2_var});
    }
    return refs;
}

Gradients GnnModel::zero_gradients() const {
    Gradients g;
    for (const auto& p : layers_) {
        g.tensors.emplace_back(p.theta1.rows, p.theta1.cols);
        g.tensors.emplace_back(p.theta2.rows, p.theta2.cols);
        g.tensors.emplace_back(p.theta3.rows, p.theta3.cols);
        g.tensors.emplace_back(p.theta4.rows, p.theta4.cols);
        g.tensors.emplace_back(p.w1.rows, p.w1.cols);
        g.tensors.emplace_back(p.bn1_scale.rows, p.bn1_scale.cols);
        g.tensors.emplace_back(p.bn1_shift.rows, p.bn1_shift.cols);
        g.tensors.emplace_back(p.w2.rows, p.w2.cols);
        g.tensors.emplace_back(p.bn2_scale.rows, p.bn2_scale.cols);
        g.tensors.emplace_back(p.bn2_shift.rows, p.bn2_shift.cols);
    }
    return g;
}

std::vector<double> GnnModel::run_forward(const SteinerInstance& instance,
                                          const std::vector<char>& in_partial, bool train_mode,
                                          const std::vector<char>* legal,
                                          ForwardTrace* trace) const {
    const int n = instance.node_count();
    if (train_mode && trace == nullptr) throw ModelError("train-mode forward needs a trace");

    // Incident edge weights enter only through their per-node multiset;
    // distinct ascending weights with counts make the aggregation order
    // canonical and cheap.
    std::vector<Weight> distinct;
    for (const auto& e : instance.edges()) distinct.push_back(e.w);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const int dw = static_cast<int>(distinct.size());
    std::vector<std::vector<int>> counts(static_cast<std::size_t>(n),
                                         std::vector<int>(static_cast<std::size_t>(dw), 0));
    for (NodeId u = 0; u < n; ++u) {
        for (const auto& a : instance.adjacency()[static_cast<std::size_t>(u)]) {
            const auto it = std::lower_bound(distinct.begin(), distinct.end(), a.w);
            ++counts[static_cast<std::size_t>(u)][static_cast<std::size_t>(it - distinct.begin())];
        }
    }
    if (trace != nullptr) {
        trace->distinct_weights = distinct;
        trace->weight_counts = counts;
        trace->layers.clear();
    }

    Matrix h = build_features(instance, in_partial);
    const int ed = config_.edge_dim;

    for (const LayerParams& p : layers_) {
        LayerTrace lt;
        const int in = h.cols;

        // Neighbor sums in lexicographic row order: permuting node labels
        // permutes the rows but not the sorted sequence being added.
        Matrix nsum(h.rows, in);
        std::vector<NodeId> nbrs;
        for (NodeId u = 0; u < n; ++u) {
            nbrs.clear();
            for (const auto& a : instance.adjacency()[static_cast<std::size_t>(u)]) {
                nbrs.push_back(a.to);
            }
            std::sort(nbrs.begin(), nbrs.end(), [&](NodeId x, NodeId y) {
                return std::lexicographical_compare(h.row(x), h.row(x) + in, h.row(y),
                                                    h.row(y) + in);
            });
            double* out = nsum.row(u);
            for (const NodeId v : nbrs) {
                const double* hv = h.row(v);
                for (int c = 0; c < in; ++c) out[c] += hv[c];
            }
        }

        // Edge-weight embeddings, one sigmoid vector per distinct weight.
        Matrix embed(dw, ed);
        for (int j = 0; j < dw; ++j) {
            const double w = static_cast<double>(distinct[static_cast<std::size_t>(j)]);
            for (int c = 0; c < ed; ++c) embed.at(j, c) = sigmoid(p.theta4.at(0, c) * w);
        }
        Matrix esum(n, ed);
        for (int u = 0; u < n; ++u) {
            double* out = esum.row(u);
            for (int j = 0; j < dw; ++j) {
                const int count = counts[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)];
                if (count == 0) continue;
                const double* ej = embed.row(j);
                for (int c = 0; c < ed; ++c) out[c] += count * ej[c];
            }
        }

        Matrix pre = matmul_nt(h, p.theta1);
        add_inplace(pre, matmul_nt(nsum, p.theta2));
        add_inplace(pre, matmul_nt(esum, p.theta3));

        Matrix z1 = matmul_nt(pre, p.w1);
        Matrix y1;
        if (train_mode) {
            batch_norm_train(z1, p.bn1_scale, p.bn1_shift, config_.bn_eps, lt.xhat1, y1,
                             lt.invstd1, lt.batch_mean1, lt.batch_var1);
        } else {
            batch_norm_eval(z1, p.bn1_scale, p.bn1_shift, p.bn1_mean, p.bn1_var, config_.bn_eps,
                            y1);
        }
        Matrix r1 = relu(y1);

        Matrix z2 = matmul_nt(r1, p.w2);
        Matrix y2;
        if (train_mode) {
            batch_norm_train(z2, p.bn2_scale, p.bn2_shift, config_.bn_eps, lt.xhat2, y2,
                             lt.invstd2, lt.batch_mean2, lt.batch_var2);
        } else {
            batch_norm_eval(z2, p.bn2_scale, p.bn2_shift, p.bn2_mean, p.bn2_var, config_.bn_eps,
                            y2);
        }
        Matrix h_next = relu(y2);

        if (trace != nullptr) {
            lt.h_in = std::move(h);
            lt.neighbor_sum = std::move(nsum);
            lt.edge_sum = std::move(esum);
            lt.edge_embed = std::move(embed);
            lt.pre = std::move(pre);
            lt.z1 = std::move(z1);
            lt.y1 = std::move(y1);
            lt.r1 = std::move(r1);
            lt.z2 = std::move(z2);
            lt.y2 = std::move(y2);
            trace->layers.push_back(std::move(lt));
        }
        h = std::move(h_next);
    }

    std::vector<double> scores(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        const double* hu = h.row(u);
        double s = 0.0;
        for (int c = 0; c < h.cols; ++c) s += hu[c];
        scores[static_cast<std::size_t>(u)] = s;
    }

    double max_score = -std::numeric_limits<double>::infinity();
    for (int u = 0; u < n; ++u) {
        if (legal != nullptr && !(*legal)[static_cast<std::size_t>(u)]) continue;
        max_score = std::max(max_score, scores[static_cast<std::size_t>(u)]);
    }
    if (max_score == -std::numeric_limits<double>::infinity()) {
        throw ModelError("no legal node to normalize over");
    }
    std::vector<double> terms(static_cast<std::size_t>(n), 0.0);
    std::vector<double> live;
    for (int u = 0; u < n; ++u) {
        if (legal != nullptr && !(*legal)[static_cast<std::size_t>(u)]) continue;
        const double t = std::exp(scores[static_cast<std::size_t>(u)] - max_score);
        terms[static_cast<std::size_t>(u)] = t;
        live.push_back(t);
    }
    const double denom = sorted_sum(live);
    std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
    for (int u = 0; u < n; ++u) probs[static_cast<std::size_t>(u)] = terms[static_cast<std::size_t>(u)] / denom;

    if (trace != nullptr) {
        trace->h_final = std::move(h);
        trace->scores = scores;
        trace->probs = probs;
    }
    return probs;
}

void GnnModel::update_running_stats(const ForwardTrace& trace) {
    const double m = config_.bn_momentum;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        LayerParams& p = layers_[l];
        const LayerTrace& lt = trace.layers[l];
        for (int c = 0; c < config_.embed_dim; ++c) {
            p.bn1_mean.at(0, c) = m * p.bn1_mean.at(0, c) + (1.0 - m) * lt.batch_mean1.at(0, c);
            p.bn1_var.at(0, c) = m * p.bn1_var.at(0, c) + (1.0 - m) * lt.batch_var1.at(0, c);
            p.bn2_mean.at(0, c) = m * p.bn2_mean.at(0, c) + (1.0 - m) * lt.batch_mean2.at(0, c);
            p.bn2_var.at(0, c) = m * p.bn2_var.at(0, c) + (1.0 - m) * lt.batch_var2.at(0, c);
        }
    }
}

std::vector<double> GnnModel::forward_train(const SteinerInstance& instance,
                                            const std::vector<char>& in_partial,
                                            ForwardTrace& trace) {
    auto probs = run_forward(instance, in_partial, true, nullptr, &trace);
    update_running_stats(trace);
    return probs;
}

std::vector<double> GnnModel::forward_eval(const SteinerInstance& instance,
                                           const std::vector<char>& in_partial,
                                           const std::vector<char>* legal) const {
    return run_forward(instance, in_partial, false, legal, nullptr);
}

LossResult GnnModel::loss_and_gradients(const SteinerInstance& instance,
                                        const std::vector<NodeId>& partial, NodeId truth) {
    const int n = instance.node_count();
    if (truth < 0 || truth >= n) throw ModelError("truth node out of range");
    const auto flags = partial_flags(instance, partial);
    if (flags[static_cast<std::size_t>(truth)]) {
        throw ModelError("truth node is already in the partial selection");
    }

    ForwardTrace trace;
    const auto probs = forward_train(instance, flags, trace);

    LossResult result;
    result.loss = -std::log(probs[static_cast<std::size_t>(truth)]);
    result.grads = zero_gradients();

    // Softmax plus cross-entropy: gradient on the scores is p - onehot.
    // The score is a plain channel sum, so each node's score gradient
    // broadcasts across its embedding row.
    const int d = config_.embed_dim;
    Matrix g_h(n, d);
    for (int u = 0; u < n; ++u) {
        const double gs = probs[static_cast<std::size_t>(u)] - (u == truth ? 1.0 : 0.0);
        double* row = g_h.row(u);
        for (int c = 0; c < d; ++c) row[c] = gs;
    }

    for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
        const LayerParams& p = layers_[static_cast<std::size_t>(l)];
        const LayerTrace& lt = trace.layers[static_cast<std::size_t>(l)];
        const int base = l * kParamsPerLayer;
        auto& g = result.grads.tensors;

        Matrix g_y2 = g_h;
        for (std::size_t i = 0; i < g_y2.data.size(); ++i) {
            if (lt.y2.data[i] <= 0.0) g_y2.data[i] = 0.0;
        }
        Matrix g_z2;
        backward_batch_norm(g_y2, lt.xhat2, lt.invstd2, p.bn2_scale, g_z2,
                            g[static_cast<std::size_t>(base + kBn2Scale)],
                            g[static_cast<std::size_t>(base + kBn2Shift)]);
        matmul_tn_accumulate(g_z2, lt.r1, g[static_cast<std::size_t>(base + kW2)]);
        Matrix g_r1 = matmul_nn(g_z2, p.w2);

        Matrix g_y1 = std::move(g_r1);
        for (std::size_t i = 0; i < g_y1.data.size(); ++i) {
            if (lt.y1.data[i] <= 0.0) g_y1.data[i] = 0.0;
        }
        Matrix g_z1;
        backward_batch_norm(g_y1, lt.xhat1, lt.invstd1, p.bn1_scale, g_z1,
                            g[static_cast<std::size_t>(base + kBn1Scale)],
                            g[static_cast<std::size_t>(base + kBn1Shift)]);
        matmul_tn_accumulate(g_z1, lt.pre, g[static_cast<std::size_t>(base + kW1)]);
        Matrix g_pre = matmul_nn(g_z1, p.w1);

        matmul_tn_accumulate(g_pre, lt.h_in, g[static_cast<std::size_t>(base + kTheta1)]);
        matmul_tn_accumulate(g_pre, lt.neighbor_sum, g[static_cast<std::size_t>(base + kTheta2)]);
        matmul_tn_accumulate(g_pre, lt.edge_sum, g[static_cast<std::size_t>(base + kTheta3)]);

        Matrix g_esum = matmul_nn(g_pre, p.theta3);
        const int dw = static_cast<int>(trace.distinct_weights.size());
        Matrix& g_theta4 = g[static_cast<std::size_t>(base + kTheta4)];
        for (int j = 0; j < dw; ++j) {
            std::vector<double> acc(static_cast<std::size_t>(config_.edge_dim), 0.0);
            for (int u = 0; u < n; ++u) {
                const int count =
                    trace.weight_counts[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)];
                if (count == 0) continue;
                const double* gu = g_esum.row(u);
                for (int c = 0; c < config_.edge_dim; ++c) acc[static_cast<std::size_t>(c)] += count * gu[c];
            }
            const double w = static_cast<double>(trace.distinct_weights[static_cast<std::size_t>(j)]);
            for (int c = 0; c < config_.edge_dim; ++c) {
                const double s = lt.edge_embed.at(j, c);
                g_theta4.at(0, c) += w * s * (1.0 - s) * acc[static_cast<std::size_t>(c)];
            }
        }

        Matrix g_nsum = matmul_nn(g_pre, p.theta2);
        Matrix g_hin = matmul_nn(g_pre, p.theta1);
        // H_v feeds the neighbor sum of every adjacent node.
        for (NodeId v = 0; v < n; ++v) {
            double* out = g_hin.row(v);
            for (const auto& a : instance.adjacency()[static_cast<std::size_t>(v)]) {
                const double* gu = g_nsum.row(a.to);
                for (int c = 0; c < g_hin.cols; ++c) out[c] += gu[c];
            }
        }
        g_h = std::move(g_hin);
    }
    return result;
}

void GnnModel::adam_step(const Gradients& grads, double lr) {
    auto refs = parameters();
    if (grads.tensors.size() != refs.size()) throw ModelError("gradient count mismatch");
    adam_.step += 1;
    const double b1 = config_.adam_beta1;
    const double b2 = config_.adam_beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(adam_.step));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(adam_.step));
    for (std::size_t i = 0; i < refs.size(); ++i) {
        Matrix& param = *refs[i].tensor;
        const Matrix& grad = grads.tensors[i];
        if (!param.same_shape(grad)) throw ModelError("gradient shape mismatch");
        Matrix& m = adam_.m[i];
        Matrix& v = adam_.v[i];
        for (std::size_t k = 0; k < param.data.size(); ++k) {
            m.data[k] = b1 * m.data[k] + (1.0 - b1) * grad.data[k];
            v.data[k] = b2 * v.data[k] + (1.0 - b2) * grad.data[k] * grad.data[k];
            const double mhat = m.data[k] / bc1;
            const double vhat = v.data[k] / bc2;
            param.data[k] -= lr * mhat / (std::sqrt(vhat) + config_.adam_eps);
        }
    }
}

}  // namespace steiner::gnn
