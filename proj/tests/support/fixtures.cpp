#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "steiner/rng.hpp"

namespace steiner::testing {

SteinerInstance diamond_instance() {
    std::vector<Edge> edges = {make_edge(0, 1, 5), make_edge(0, 2, 5), make_edge(1, 2, 5),
                               make_edge(0, 3, 3), make_edge(1, 3, 3), make_edge(2, 3, 3)};
    return SteinerInstance::create(4, std::move(edges), {0, 1, 2}, std::nullopt, "diamond");
}

SteinerInstance path3_instance() {
    std::vector<Edge> edges = {make_edge(0, 1, 5), make_edge(1, 2, 5)};
    return SteinerInstance::create(3, std::move(edges), {0, 2}, std::nullopt, "path3");
}

SteinerInstance triangle_instance() {
    std::vector<Edge> edges = {make_edge(0, 1, 1), make_edge(1, 2, 2), make_edge(0, 2, 3)};
    return SteinerInstance::create(3, std::move(edges), {0, 1, 2}, std::nullopt, "triangle");
}

std::vector<SteinerInstance> small_instances(int count, std::uint64_t seed) {
    static const GraphModel kModels[] = {GraphModel::erdos_renyi, GraphModel::watts_strogatz,
                                         GraphModel::barabasi_albert, GraphModel::geometric};
    std::vector<SteinerInstance> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        GeneratorConfig config;
        config.model = kModels[i % 4];
        config.n = 8 + (i / 4) % 5;
        config.terminal_count = 2 + i % 4;
        config.weighted = (i / 2) % 2 == 0;
        config.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
        out.push_back(generate(config));
    }
    return out;
}

namespace {

void dfs_paths(const SteinerInstance& instance, NodeId at, NodeId target, Cost cost,
               std::vector<char>& visited, Cost& best) {
    if (at == target) {
        best = std::min(best, cost);
        return;
    }
    for (const auto& entry : instance.adjacency()[static_cast<std::size_t>(at)]) {
        if (visited[static_cast<std::size_t>(entry.to)]) continue;
        visited[static_cast<std::size_t>(entry.to)] = 1;
        dfs_paths(instance, entry.to, target, cost + entry.w, visited, best);
        visited[static_cast<std::size_t>(entry.to)] = 0;
    }
}

}  // namespace

Cost enumerated_distance(const SteinerInstance& instance, NodeId s, NodeId t) {
    std::vector<char> visited(static_cast<std::size_t>(instance.node_count()), 0);
    visited[static_cast<std::size_t>(s)] = 1;
    Cost best = std::numeric_limits<Cost>::max();
    dfs_paths(instance, s, t, 0, visited, best);
    return best;
}

SteinerInstance relabel(const SteinerInstance& instance, const std::vector<NodeId>& perm) {
    const int n = instance.node_count();
    if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("perm size mismatch");
    std::vector<Edge> edges;
    edges.reserve(instance.edges().size());
    for (const auto& e : instance.edges()) {
        edges.push_back(make_edge(perm[static_cast<std::size_t>(e.u)],
                                  perm[static_cast<std::size_t>(e.v)], e.w));
    }
    std::vector<NodeId> terminals;
    for (const NodeId t : instance.terminals()) {
        terminals.push_back(perm[static_cast<std::size_t>(t)]);
    }
    std::sort(terminals.begin(), terminals.end());
    std::optional<std::vector<Point>> coords;
    if (instance.coords()) {
        std::vector<Point> moved(static_cast<std::size_t>(n));
        for (NodeId v = 0; v < n; ++v) {
            moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] =
                (*instance.coords())[static_cast<std::size_t>(v)];
        }
        coords = std::move(moved);
    }
    return SteinerInstance::create(n, std::move(edges), std::move(terminals), std::move(coords),
                                   instance.id() + "-relabel");
}

SteinerTree relabel_tree_back(const SteinerInstance& original, const SteinerTree& tree,
                              const std::vector<NodeId>& perm) {
    std::vector<NodeId> inverse(perm.size());
    for (std::size_t v = 0; v < perm.size(); ++v) {
        inverse[static_cast<std::size_t>(perm[v])] = static_cast<NodeId>(v);
    }
    std::vector<EdgeKey> keys;
    keys.reserve(tree.edges.size());
    for (const auto& e : tree.edges) {
        keys.push_back(make_edge_key(inverse[static_cast<std::size_t>(e.u)],
                                     inverse[static_cast<std::size_t>(e.v)]));
    }
    return make_tree(original, std::move(keys));
}

GradCheckResult finite_difference_check(gnn::GnnModel& model, const SteinerInstance& instance,
                                        const std::vector<NodeId>& partial, NodeId truth,
                                        double eps) {
    const gnn::LossResult analytic = model.loss_and_gradients(instance, partial, truth);
    auto params = model.parameters();
    GradCheckResult result;
    for (std::size_t p = 0; p < params.size(); ++p) {
        gnn::Matrix& tensor = *params[p].tensor;
        const gnn::Matrix& grad = analytic.grads.tensors[p];
        for (std::size_t i = 0; i < tensor.data.size(); ++i) {
            const double saved = tensor.data[i];
            tensor.data[i] = saved + eps;
            const double plus = model.loss_and_gradients(instance, partial, truth).loss;
            tensor.data[i] = saved - eps;
            const double minus = model.loss_and_gradients(instance, partial, truth).loss;
            tensor.data[i] = saved;
            const double numeric = (plus - minus) / (2.0 * eps);
            const double a = grad.data[i];
            const double scale = std::max({std::abs(a), std::abs(numeric), 1e-3});
            const double rel = std::abs(a - numeric) / scale;
            if (rel > result.max_rel_error) {
                result.max_rel_error = rel;
                result.worst_param = params[p].name + "[" + std::to_string(i) + "]";
            }
        }
    }
    return result;
}

}  // namespace steiner::testing
