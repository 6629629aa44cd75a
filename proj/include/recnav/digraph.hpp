#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace recnav {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable directed graph in compressed sparse row form with both out- and
/// in-adjacency. Out-lists keep the order in which edges were supplied.
class Digraph {
public:
    Digraph() = default;
    Digraph(std::size_t num_nodes, std::span<const Edge> edges);

    std::size_t size() const noexcept { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return out_targets_.size(); }

    std::span<const NodeId> out(NodeId u) const {
        return {out_targets_.data() + out_offsets_[u], out_targets_.data() + out_offsets_[u + 1]};
    }
    std::span<const NodeId> in(NodeId v) const {
        return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
    }

    bool has_edge(NodeId u, NodeId v) const;
    std::vector<Edge> edges() const;

private:
    std::vector<std::size_t> out_offsets_;
    std::vector<NodeId> out_targets_;
    std::vector<std::size_t> in_offsets_;
    std::vector<NodeId> in_sources_;
};

/// Hop distances from `source` following out-edges (or in-edges when
/// `reverse`); unreachable nodes get -1.
std::vector<std::int32_t> bfs_distances(const Digraph& g, NodeId source, bool reverse = false);

} // namespace recnav
