#include "steiner/shortest_paths.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace steiner {

namespace {
constexpr Cost kInf = std::numeric_limits<Cost>::max();
}

ShortestPaths shortest_paths(const SteinerInstance& instance, NodeId source) {
    const int n = instance.node_count();
    if (source < 0 || source >= n) throw GraphError("shortest_paths: source out of range");

    ShortestPaths result;
    result.dist.assign(static_cast<std::size_t>(n), kInf);
    result.parent.assign(static_cast<std::size_t>(n), -1);
    result.dist[static_cast<std::size_t>(source)] = 0;

    using Item = std::pair<Cost, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0, source);

    std::vector<std::uint8_t> done(static_cast<std::size_t>(n), 0);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[static_cast<std::size_t>(u)]) continue;
        done[static_cast<std::size_t>(u)] = 1;
        for (const AdjEntry& e : instance.adjacency()[static_cast<std::size_t>(u)]) {
            const Cost nd = d + e.w;
            Cost& dv = result.dist[static_cast<std::size_t>(e.to)];
            NodeId& pv = result.parent[static_cast<std::size_t>(e.to)];
            if (nd < dv) {
                dv = nd;
                pv = u;
                heap.emplace(nd, e.to);
            } else if (nd == dv && e.to != source && u < pv) {
                pv = u;  // deterministic witness: smallest predecessor id
            }
        }
    }
    return result;
}

std::vector<NodeId> ShortestPaths::path_to(NodeId target) const {
    std::vector<NodeId> path;
    NodeId v = target;
    while (v != -1) {
        path.push_back(v);
        v = parent[static_cast<std::size_t>(v)];
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace steiner
