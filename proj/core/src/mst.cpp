#include "steiner/mst.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace steiner {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<Edge> minimum_spanning_tree(const std::vector<NodeId>& nodes, std::vector<Edge> edges) {
    if (nodes.empty()) return {};

    std::unordered_map<NodeId, std::size_t> index;
    index.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tuple(a.w, std::min(a.u, a.v), std::max(a.u, a.v)) <
               std::tuple(b.w, std::min(b.u, b.v), std::max(b.u, b.v));
    });

    DisjointSets sets(nodes.size());
    std::vector<Edge> tree;
    tree.reserve(nodes.size() - 1);
    for (const Edge& e : edges) {
        auto iu = index.find(e.u);
        auto iv = index.find(e.v);
        if (iu == index.end() || iv == index.end()) {
            throw GraphError("minimum_spanning_tree: edge endpoint outside node set");
        }
        if (sets.unite(iu->second, iv->second)) tree.push_back(make_edge(e.u, e.v, e.w));
    }
    if (tree.size() != nodes.size() - 1) throw GraphError("minimum_spanning_tree: node set not connected by given edges");

    std::sort(tree.begin(), tree.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    return tree;
}

}  // namespace steiner
