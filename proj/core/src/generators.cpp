#include "steiner/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <stdexcept>

#include "steiner/rng.hpp"

namespace steiner {

namespace {

constexpr int kMaxAttempts = 100;
constexpr Weight kMinWeight = 1;
constexpr Weight kMaxWeight = 10;

std::vector<std::pair<NodeId, NodeId>> erdos_renyi_edges(int n, Rng& rng) {
    const double p = erdos_renyi_probability(n);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (rng.uniform01() < p) edges.emplace_back(u, v);
        }
    }
    return edges;
}

std::vector<std::pair<NodeId, NodeId>> watts_strogatz_edges(int n, Rng& rng) {
    constexpr int kHalfK = 3;      // K = 6 ring neighbors, three per side
    constexpr double kRewire = 0.2;
    if (n <= 2 * kHalfK) throw GenerationError("watts_strogatz requires n > 6");

    std::set<std::pair<NodeId, NodeId>> edges;
    auto key = [](NodeId a, NodeId b) -> std::pair<NodeId, NodeId> {
        return a < b ? std::pair<NodeId, NodeId>{a, b} : std::pair<NodeId, NodeId>{b, a};
    };
    for (NodeId i = 0; i < n; ++i) {
        for (int j = 1; j <= kHalfK; ++j) {
            edges.insert(key(i, static_cast<NodeId>((i + j) % n)));
        }
    }
    // Rewire the far endpoint of each original lattice edge with probability
    // 0.2, resampling targets that would create a self-loop or duplicate.
    for (NodeId i = 0; i < n; ++i) {
        for (int j = 1; j <= kHalfK; ++j) {
            if (rng.uniform01() >= kRewire) continue;
            const auto old_edge = key(i, static_cast<NodeId>((i + j) % n));
            if (edges.count(old_edge) == 0) continue;  // already rewired away
            bool found = false;
            NodeId target = 0;
            for (int attempt = 0; attempt < 4 * n; ++attempt) {
                target = static_cast<NodeId>(rng.uniform_below(static_cast<std::uint64_t>(n)));
                const auto candidate = key(i, target);
                if (target != i && candidate != old_edge && edges.count(candidate) == 0) {
                    found = true;
                    break;
                }
            }
            if (!found) continue;  // node saturated, keep the lattice edge
            edges.erase(old_edge);
            edges.insert(key(i, target));
        }
    }
    return {edges.begin(), edges.end()};
}

std::vector<std::pair<NodeId, NodeId>> barabasi_albert_edges(int n, Rng& rng) {
    constexpr int kCore = 5;  // m0: seed path 0-1-...-4
    constexpr int kM = 5;     // edges added per new node
    if (n <= kCore) throw GenerationError("barabasi_albert requires n > 5");

    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<NodeId> endpoint_pool;  // node ids repeated by degree
    for (NodeId i = 0; i + 1 < kCore; ++i) {
        edges.emplace_back(i, i + 1);
        endpoint_pool.push_back(i);
        endpoint_pool.push_back(i + 1);
    }
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);
    for (NodeId v = kCore; v < n; ++v) {
        std::vector<NodeId> targets;
        while (static_cast<int>(targets.size()) < kM) {
            const NodeId t = endpoint_pool[rng.uniform_below(endpoint_pool.size())];
            if (chosen[static_cast<std::size_t>(t)]) continue;
            chosen[static_cast<std::size_t>(t)] = 1;
            targets.push_back(t);
        }
        for (const NodeId t : targets) {
            chosen[static_cast<std::size_t>(t)] = 0;
            edges.emplace_back(std::min(t, v), std::max(t, v));
            endpoint_pool.push_back(t);
            endpoint_pool.push_back(v);
        }
    }
    return edges;
}

std::vector<std::pair<NodeId, NodeId>> geometric_edges(int n, Rng& rng,
                                                       std::vector<Point>& coords) {
    const double r = geometric_radius(n);
    const double r2 = r * r;
    coords.resize(static_cast<std::size_t>(n));
    for (auto& p : coords) {
        p.x = rng.uniform01();
        p.y = rng.uniform01();
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            const double dx = coords[static_cast<std::size_t>(u)].x - coords[static_cast<std::size_t>(v)].x;
            const double dy = coords[static_cast<std::size_t>(u)].y - coords[static_cast<std::size_t>(v)].y;
            if (dx * dx + dy * dy <= r2) edges.emplace_back(u, v);
        }
    }
    return edges;
}

}  // namespace

double erdos_renyi_probability(int n) {
    return std::min(1.0, 2.0 * std::log(static_cast<double>(n)) / static_cast<double>(n));
}

double geometric_radius(int n) {
    return std::sqrt(2.0 * std::log(static_cast<double>(n)) /
                     (std::numbers::pi * static_cast<double>(n)));
}

std::string to_string(GraphModel model) {
    switch (model) {
        case GraphModel::erdos_renyi: return "erdos_renyi";
        case GraphModel::watts_strogatz: return "watts_strogatz";
        case GraphModel::barabasi_albert: return "barabasi_albert";
        case GraphModel::geometric: return "geometric";
    }
    throw std::logic_error("unknown graph model");
}

GraphModel graph_model_from_string(const std::string& name) {
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "erdos_renyi") return GraphModel::erdos_renyi;
    if (key == "watts_strogatz") return GraphModel::watts_strogatz;
    if (key == "barabasi_albert") return GraphModel::barabasi_albert;
    if (key == "geometric") return GraphModel::geometric;
    throw GenerationError("unknown graph model: " + name);
}

SteinerInstance generate(const GeneratorConfig& config) {
    if (config.n < 2) throw GenerationError("instance needs at least 2 nodes");
    if (config.terminal_count < 2 || config.terminal_count > config.n) {
        throw GenerationError("terminal count must be in [2, n]");
    }

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(attempt)));
        std::vector<Point> coords;
        std::vector<std::pair<NodeId, NodeId>> pairs;
        switch (config.model) {
            case GraphModel::erdos_renyi: pairs = erdos_renyi_edges(config.n, rng); break;
            case GraphModel::watts_strogatz: pairs = watts_strogatz_edges(config.n, rng); break;
            case GraphModel::barabasi_albert: pairs = barabasi_albert_edges(config.n, rng); break;
            case GraphModel::geometric: pairs = geometric_edges(config.n, rng, coords); break;
        }
        std::sort(pairs.begin(), pairs.end());
        std::vector<Edge> edges;
        edges.reserve(pairs.size());
        for (const auto& [u, v] : pairs) edges.push_back(make_edge(u, v, 1));
        if (!is_connected(config.n, edges)) continue;

        // Weights are drawn against the canonical edge order so they do not
        // depend on the model's internal generation order.
        if (config.weighted) {
            for (auto& e : edges) e.w = rng.uniform_int(kMinWeight, kMaxWeight);
        }
        std::vector<NodeId> terminals;
        for (const int idx : rng.sample_without_replacement(config.n, config.terminal_count)) {
            terminals.push_back(static_cast<NodeId>(idx));
        }
        std::sort(terminals.begin(), terminals.end());

        std::string id = config.id;
        if (id.empty()) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%s-n%03d-%s-s%llu", to_string(config.model).c_str(),
                          config.n, config.weighted ? "w" : "u",
                          static_cast<unsigned long long>(config.seed));
            id = buf;
        }
        std::optional<std::vector<Point>> coords_opt;
        if (config.model == GraphModel::geometric) coords_opt = std::move(coords);
        return SteinerInstance::create(config.n, std::move(edges), std::move(terminals),
                                       std::move(coords_opt), std::move(id));
    }
    throw GenerationError("no connected graph after 100 attempts (model " +
                          to_string(config.model) + ", n " + std::to_string(config.n) + ")");
}

int resolve_terminal_count(const TerminalSpec& spec, int index, int n) {
    if (const int* fixed = std::get_if<int>(&spec)) return *fixed;
    const auto& fractions = std::get<std::vector<double>>(spec);
    if (fractions.empty()) throw GenerationError("terminal fraction list is empty");
    const double f = fractions[static_cast<std::size_t>(index) % fractions.size()];
    const int count = static_cast<int>(std::llround(f * n));
    return std::max(2, std::min(count, n));
}

Dataset make_dataset(GraphModel model, int n, int count, const TerminalSpec& terminal_spec,
                     bool weighted, std::uint64_t seed) {
    Dataset dataset;
    dataset.model = model;
    dataset.n = n;
    dataset.weighted = weighted;
    dataset.base_seed = seed;
    dataset.instances.reserve(static_cast<std::size_t>(count));
    dataset.configs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        GeneratorConfig config;
        config.model = model;
        config.n = n;
        config.terminal_count = resolve_terminal_count(terminal_spec, i, n);
        config.weighted = weighted;
        config.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
        char id[96];
        std::snprintf(id, sizeof(id), "%s-n%03d-%s-i%03d", to_string(model).c_str(), n,
                      weighted ? "w" : "u", i);
        config.id = id;
        dataset.instances.push_back(generate(config));
        dataset.configs.push_back(config);
    }
    return dataset;
}

}  // namespace steiner
