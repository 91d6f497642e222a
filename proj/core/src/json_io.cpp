#include "steiner/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace steiner {

using nlohmann::ordered_json;

std::string instance_to_json(const SteinerInstance& instance) {
    ordered_json j;
    j["id"] = instance.id();
    j["n"] = instance.node_count();
    ordered_json edges = ordered_json::array();
    for (const Edge& e : instance.edges()) edges.push_back({e.u, e.v, e.w});
    j["edges"] = std::move(edges);
    j["terminals"] = instance.terminals();
    if (instance.coords()) {
        ordered_json coords = ordered_json::array();
        for (const Point& p : *instance.coords()) coords.push_back({p.x, p.y});
        j["coords"] = std::move(coords);
    } else {
        j["coords"] = nullptr;
    }
    return j.dump() + "\n";
}

SteinerInstance instance_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::exception& err) {
        throw GraphError(std::string("instance JSON parse failed: ") + err.what());
    }
    try {
        const int n = j.at("n").get<int>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.at(2).is_number_integer()) {
                throw GraphError("instance JSON: edge weights must be integers");
            }
            edges.push_back(make_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<Weight>()));
        }
        std::vector<NodeId> terminals = j.at("terminals").get<std::vector<NodeId>>();
        std::optional<std::vector<Point>> coords;
        if (j.contains("coords") && !j.at("coords").is_null()) {
            std::vector<Point> pts;
            for (const auto& c : j.at("coords")) pts.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
            coords = std::move(pts);
        }
        std::string id = j.value("id", std::string{});
        return SteinerInstance::create(n, std::move(edges), std::move(terminals), std::move(coords), std::move(id));
    } catch (const ordered_json::exception& err) {
        throw GraphError(std::string("instance JSON malformed: ") + err.what());
    }
}

std::string solution_to_json(const SteinerTree& tree, double runtime_ms) {
    ordered_json j;
    j["cost"] = tree.cost;
    ordered_json edges = ordered_json::array();
    for (const Edge& e : tree.edges) edges.push_back({e.u, e.v});
    j["edges"] = std::move(edges);
    j["runtime_ms"] = runtime_ms;
    return j.dump() + "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GraphError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GraphError("cannot write " + path);
    out << content;
}

}  // namespace steiner
