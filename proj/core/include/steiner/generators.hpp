#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "steiner/instance.hpp"

namespace steiner {

enum class GraphModel { erdos_renyi, watts_strogatz, barabasi_albert, geometric };

std::string to_string(GraphModel model);
GraphModel graph_model_from_string(const std::string& name);

// Fixed parameterizations: ER edge probability 2 ln(n)/n; WS ring lattice
// K = 6 (three neighbors each side) with rewiring probability 0.2; BA core
// m0 = 5 path, m = 5 edges per new node; geometric radius sqrt(2 ln(n)/(pi n))
// over the unit square.
struct GeneratorConfig {
    GraphModel model = GraphModel::erdos_renyi;
    int n = 20;
    int terminal_count = 10;
    bool weighted = false;
    std::uint64_t seed = 0;
    std::string id;  // empty: derived from model, n, weighted flag, seed
};

class GenerationError : public GraphError {
public:
    explicit GenerationError(const std::string& what) : GraphError(what) {}
};

// Generates one connected instance. Draws are retried with derived seeds
// until the graph comes out connected (at most 100 attempts). Weighted
// instances get integer weights uniform in {1..10}; geometric instances
// carry their sampled coordinates.
SteinerInstance generate(const GeneratorConfig& config);

// Either a fixed terminal count or a list of fractions of n cycled across
// the dataset (rounded, never below 2).
using TerminalSpec = std::variant<int, std::vector<double>>;

int resolve_terminal_count(const TerminalSpec& spec, int index, int n);

struct Dataset {
    GraphModel model = GraphModel::erdos_renyi;
    int n = 0;
    bool weighted = false;
    std::uint64_t base_seed = 0;
    std::vector<SteinerInstance> instances;
    std::vector<GeneratorConfig> configs;  // parallel to instances
};

Dataset make_dataset(GraphModel model, int n, int count, const TerminalSpec& terminal_spec,
                     bool weighted, std::uint64_t seed);

double erdos_renyi_probability(int n);
double geometric_radius(int n);

}  // namespace steiner
