#include "recnav/digraph.hpp"

#include "recnav/error.hpp"

#include <algorithm>
#include <string>

namespace recnav {

Digraph::Digraph(std::size_t num_nodes, std::span<const Edge> edges)
    : out_offsets_(num_nodes + 1, 0), out_targets_(edges.size()), in_offsets_(num_nodes + 1, 0),
      in_sources_(edges.size()) {
    for (const auto& [u, v] : edges) {
        if (u >= num_nodes || v >= num_nodes) {
            throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") outside graph of " + std::to_string(num_nodes) + " nodes");
        }
        ++out_offsets_[u + 1];
        ++in_offsets_[v + 1];
    }
    for (std::size_t i = 0; i < num_nodes; ++i) {
        out_offsets_[i + 1] += out_offsets_[i];
        in_offsets_[i + 1] += in_offsets_[i];
    }
    std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
    std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        out_targets_[out_fill[u]++] = v;
    }
    // In-lists are filled in ascending source order.
    for (NodeId u = 0; u < num_nodes; ++u) {
        for (auto i = out_offsets_[u]; i < out_offsets_[u + 1]; ++i) {
            const NodeId v = out_targets_[i];
            in_sources_[in_fill[v]++] = u;
        }
    }
}

bool Digraph::has_edge(NodeId u, NodeId v) const {
    const auto targets = out(u);
    return std::find(targets.begin(), targets.end(), v) != targets.end();
}

std::vector<Edge> Digraph::edges() const {
    std::vector<Edge> result;
    result.reserve(edge_count());
    for (NodeId u = 0; u < size(); ++u) {
        for (NodeId v : out(u)) {
            result.emplace_back(u, v);
        }
    }
    return result;
}

std::vector<std::int32_t> bfs_distances(const Digraph& g, NodeId source, bool reverse) {
    std::vector<std::int32_t> dist(g.size(), -1);
    std::vector<NodeId> queue;
    queue.reserve(g.size());
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        for (NodeId v : reverse ? g.in(u) : g.out(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

} // namespace recnav
