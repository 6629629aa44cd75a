#include "recnav/topology.hpp"

#include "recnav/error.hpp"

#include <algorithm>
#include <limits>

namespace recnav {

ComponentReport strongly_connected_components(const Digraph& g) {
    const std::size_t n = g.size();
    constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

    std::vector<std::uint32_t> index(n, kUnset), low(n, 0), raw_label(n, kUnset);
    std::vector<char> on_stack(n, 0);
    std::vector<NodeId> stack;
    std::vector<std::pair<NodeId, std::size_t>> call; // node, next out-edge position
    std::uint32_t counter = 0, components = 0;

    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != kUnset) {
            continue;
        }
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [u, pos] = call.back();
            const auto targets = g.out(u);
            if (pos < targets.size()) {
                const NodeId v = targets[pos++];
                if (index[v] == kUnset) {
                    index[v] = low[v] = counter++;
                    stack.push_back(v);
                    on_stack[v] = 1;
                    call.emplace_back(v, 0);
                } else if (on_stack[v]) {
                    low[u] = std::min(low[u], index[v]);
                }
                continue;
            }
            const NodeId done = u;
            call.pop_back();
            if (!call.empty()) {
                const NodeId parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    raw_label[w] = components;
                } while (w != done);
                ++components;
            }
        }
    }

    // Relabel so components are ordered by their smallest member.
    ComponentReport report;
    report.num_scc = components;
    report.scc_id.assign(n, 0);
    std::vector<std::uint32_t> relabel(components, kUnset);
    std::uint32_t next = 0;
    for (NodeId v = 0; v < n; ++v) {
        auto& l = relabel[raw_label[v]];
        if (l == kUnset) {
            l = next++;
        }
        report.scc_id[v] = l;
    }
    report.sizes.assign(components, 0);
    for (NodeId v = 0; v < n; ++v) {
        ++report.sizes[report.scc_id[v]];
    }
    for (std::uint32_t c = 0; c < components; ++c) {
        if (report.sizes[c] > report.sizes[report.largest]) {
            report.largest = c;
        }
    }
    report.largest_scc_fraction =
        n ? static_cast<double>(report.largest_size()) / static_cast<double>(n) : 0.0;
    report.clustering_coefficient = clustering_coefficient(g);
    return report;
}

double clustering_coefficient(const Digraph& g) {
    const std::size_t n = g.size();
    if (n == 0) {
        return 0.0;
    }
    // neighbor[v] == i marks v as an out-neighbor of i; edge_seen stamps
    // deduplicate parallel edges j->k.
    std::vector<NodeId> neighbor(n, std::numeric_limits<NodeId>::max());
    std::vector<std::size_t> edge_seen(n, 0);
    std::size_t stamp = 0;
    std::vector<NodeId> distinct;
    double total = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        distinct.clear();
        for (NodeId j : g.out(i)) {
            if (j != i && neighbor[j] != i) {
                neighbor[j] = i;
                distinct.push_back(j);
            }
        }
        const std::size_t degree = distinct.size();
        if (degree < 2) {
            continue;
        }
        std::size_t links = 0;
        for (NodeId j : distinct) {
            ++stamp;
            for (NodeId k : g.out(j)) {
                if (k != j && neighbor[k] == i && edge_seen[k] != stamp) {
                    edge_seen[k] = stamp;
                    ++links;
                }
            }
        }
        total += static_cast<double>(links) / static_cast<double>(degree * (degree - 1));
    }
    return total / static_cast<double>(n);
}

std::map<std::uint32_t, std::size_t> EccentricityReport::histogram() const {
    std::map<std::uint32_t, std::size_t> h;
    for (auto v : values) {
        ++h[v];
    }
    return h;
}

EccentricityReport eccentricities(const Digraph& g) {
    return eccentricities(g, strongly_connected_components(g));
}

EccentricityReport eccentricities(const Digraph& g, const ComponentReport& components) {
    if (components.largest_size() < 2) {
        throw InvalidArgument("largest SCC has fewer than 2 nodes: no meaningful eccentricity");
    }
    EccentricityReport report;
    const std::uint32_t core = components.largest;
    for (NodeId v = 0; v < g.size(); ++v) {
        if (components.scc_id[v] == core) {
            report.nodes.push_back(v);
        }
    }
    std::vector<std::int32_t> dist(g.size(), -1);
    std::vector<NodeId> queue;
    queue.reserve(report.nodes.size());
    for (NodeId source : report.nodes) {
        for (NodeId v : queue) {
            dist[v] = -1;
        }
        queue.clear();
        dist[source] = 0;
        queue.push_back(source);
        std::int32_t farthest = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const NodeId u = queue[head];
            for (NodeId v : g.out(u)) {
                if (dist[v] < 0 && components.scc_id[v] == core) {
                    dist[v] = dist[u] + 1;
                    farthest = std::max(farthest, dist[v]);
                    queue.push_back(v);
                }
            }
        }
        report.values.push_back(static_cast<std::uint32_t>(farthest));
        report.diameter = std::max(report.diameter, static_cast<std::uint32_t>(farthest));
    }
    return report;
}

std::string_view to_string(BowTieRegion region) {
    switch (region) {
    case BowTieRegion::scc: return "SCC";
    case BowTieRegion::in: return "IN";
    case BowTieRegion::out: return "OUT";
    case BowTieRegion::tube: return "TUBE";
    case BowTieRegion::tendril_in: return "TL_IN";
    case BowTieRegion::tendril_out: return "TL_OUT";
    case BowTieRegion::other: return "OTHER";
    }
    return "OTHER";
}

BowTie bowtie(const Digraph& g) {
    return bowtie(g, strongly_connected_components(g));
}

namespace {

/// Marks every node reachable from the seeds (seeds included).
std::vector<char> reach(const Digraph& g, const std::vector<NodeId>& seeds, bool reverse) {
    std::vector<char> seen(g.size(), 0);
    std::vector<NodeId> queue = seeds;
    for (NodeId s : seeds) {
        seen[s] = 1;
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (NodeId v : reverse ? g.in(queue[head]) : g.out(queue[head])) {
            if (!seen[v]) {
                seen[v] = 1;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

} // namespace

BowTie bowtie(const Digraph& g, const ComponentReport& components) {
    const std::size_t n = g.size();
    BowTie result;
    result.label.assign(n, BowTieRegion::other);
    if (n == 0) {
        return result;
    }

    std::vector<NodeId> core;
    for (NodeId v = 0; v < n; ++v) {
        if (components.scc_id[v] == components.largest) {
            core.push_back(v);
        }
    }
    const auto from_core = reach(g, core, false);
    const auto to_core = reach(g, core, true);

    std::vector<NodeId> in_nodes, out_nodes;
    for (NodeId v = 0; v < n; ++v) {
        if (components.scc_id[v] == components.largest) {
            result.label[v] = BowTieRegion::scc;
        } else if (to_core[v]) {
            result.label[v] = BowTieRegion::in;
            in_nodes.push_back(v);
        } else if (from_core[v]) {
            result.label[v] = BowTieRegion::out;
            out_nodes.push_back(v);
        }
    }

    const auto from_in = reach(g, in_nodes, false);
    const auto to_out = reach(g, out_nodes, true);
    for (NodeId v = 0; v < n; ++v) {
        if (result.label[v] != BowTieRegion::other) {
            continue;
        }
        if (from_in[v] && to_out[v]) {
            result.label[v] = BowTieRegion::tube;
        } else if (from_in[v]) {
            result.label[v] = BowTieRegion::tendril_in;
        } else if (to_out[v]) {
            result.label[v] = BowTieRegion::tendril_out;
        }
    }
    for (auto l : result.label) {
        ++result.sizes[static_cast<std::size_t>(l)];
    }
    return result;
}

std::vector<TransitionMatrix> membership_change(std::span<const BowTie> series) {
    std::vector<TransitionMatrix> result;
    for (std::size_t s = 1; s < series.size(); ++s) {
        const auto& before = series[s - 1].label;
        const auto& after = series[s].label;
        if (before.size() != after.size()) {
            throw InvalidArgument("membership_change: networks have different node sets");
        }
        TransitionMatrix m{};
        for (std::size_t v = 0; v < before.size(); ++v) {
            ++m[static_cast<std::size_t>(before[v])][static_cast<std::size_t>(after[v])];
        }
        result.push_back(m);
    }
    return result;
}

} // namespace recnav
