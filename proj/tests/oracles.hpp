// Brute-force reference implementations used by the tests. They work on plain
// adjacency matrices and never call into the library's graph algorithms.
#pragma once

#include "recnav/digraph.hpp"
#include "recnav/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

namespace oracle {

using recnav::Edge;
using recnav::NodeId;

using BoolMatrix = std::vector<std::vector<bool>>;
using IntMatrix = std::vector<std::vector<int>>;

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline BoolMatrix adjacency(std::size_t n, const std::vector<Edge>& edges) {
    BoolMatrix a(n, std::vector<bool>(n, false));
    for (auto [u, v] : edges) {
        a[u][v] = true;
    }
    return a;
}

/// Reflexive transitive closure (Warshall).
inline BoolMatrix reach(std::size_t n, const std::vector<Edge>& edges) {
    auto r = adjacency(n, edges);
    for (std::size_t i = 0; i < n; ++i) {
        r[i][i] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!r[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (r[k][j]) r[i][j] = true;
            }
        }
    }
    return r;
}

/// Floyd-Warshall hop distances; kInf when unreachable, 0 on the diagonal.
inline IntMatrix distances(std::size_t n, const std::vector<Edge>& edges) {
    IntMatrix d(n, std::vector<int>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (auto [u, v] : edges) {
        if (u != v) d[u][v] = 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i][k] == kInf) continue;
            for (std::size_t j = 0; j < n; ++j) {
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
            }
        }
    }
    return d;
}

/// Component of every node as the smallest node it is mutually reachable with.
inline std::vector<NodeId> scc_representative(const BoolMatrix& r) {
    const auto n = r.size();
    std::vector<NodeId> rep(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (r[i][j] && r[j][i]) {
                rep[i] = static_cast<NodeId>(j);
                break;
            }
        }
    }
    return rep;
}

/// Members of the largest SCC; on equal size the one holding the smallest node.
inline std::vector<NodeId> largest_scc(const BoolMatrix& r) {
    const auto rep = scc_representative(r);
    std::vector<std::size_t> count(r.size(), 0);
    for (auto x : rep) ++count[x];
    std::size_t best = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (count[i] > count[best]) best = i;
    }
    std::vector<NodeId> members;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (rep[i] == best) members.push_back(static_cast<NodeId>(i));
    }
    return members;
}

/// Mean over i of |{(j,k) : j != k, j,k in out(i), j->k}| / (d(d-1)).
inline double clustering(std::size_t n, const std::vector<Edge>& edges) {
    const auto a = adjacency(n, edges);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n; ++j) {
            if (a[i][j] && j != i) out.push_back(j);
        }
        const double d = static_cast<double>(out.size());
        if (out.size() < 2) continue;
        std::size_t links = 0;
        for (auto j : out) {
            for (auto k : out) {
                if (j != k && a[j][k]) ++links;
            }
        }
        total += static_cast<double>(links) / (d * (d - 1.0));
    }
    return n ? total / static_cast<double>(n) : 0.0;
}

/// Eccentricities of the largest SCC members (ascending node order).
inline std::vector<int> eccentricities(std::size_t n, const std::vector<Edge>& edges) {
    const auto r = reach(n, edges);
    const auto members = largest_scc(r);
    const auto d = distances(n, edges);
    std::vector<int> ecc;
    for (auto u : members) {
        int e = 0;
        for (auto v : members) {
            e = std::max(e, d[u][v]);
        }
        ecc.push_back(e);
    }
    return ecc;
}

enum Region { SCC, IN, OUT, TUBE, TL_IN, TL_OUT, OTHER };

inline std::vector<Region> bowtie(std::size_t n, const std::vector<Edge>& edges) {
    const auto r = reach(n, edges);
    const auto members = largest_scc(r);
    std::vector<bool> core(n, false);
    for (auto m : members) core[m] = true;
    const NodeId c = members.front();
    std::vector<Region> label(n, OTHER);
    for (std::size_t v = 0; v < n; ++v) {
        if (core[v]) label[v] = SCC;
        else if (r[v][c]) label[v] = IN;
        else if (r[c][v]) label[v] = OUT;
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (label[v] != OTHER) continue;
        bool from_in = false;
        bool to_out = false;
        for (std::size_t w = 0; w < n; ++w) {
            if (label[w] == IN && r[w][v]) from_in = true;
            if (label[w] == OUT && r[v][w]) to_out = true;
        }
        if (from_in && to_out) label[v] = TUBE;
        else if (from_in) label[v] = TL_IN;
        else if (to_out) label[v] = TL_OUT;
    }
    return label;
}

/// Random digraph without self-loops or duplicate edges; each ordered pair is
/// an edge with probability p.
inline std::vector<Edge> random_graph(std::size_t n, double p, std::uint64_t seed) {
    recnav::Rng rng(seed);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = 0; v < n; ++v) {
            if (u != v && rng.uniform01() < p) edges.emplace_back(u, v);
        }
    }
    return edges;
}

/// Random graph where every node has exactly `out` distinct targets, chosen
/// with a preference for low ids so that the structure is popularity-skewed.
inline std::vector<Edge> random_out_regular(std::size_t n, std::size_t out, std::uint64_t seed) {
    recnav::Rng rng(seed);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        std::set<NodeId> picked;
        while (picked.size() < std::min(out, n - 1)) {
            const double x = rng.uniform01();
            const auto v = static_cast<NodeId>(std::floor(x * x * static_cast<double>(n)));
            if (v != u) picked.insert(v);
        }
        for (auto v : picked) edges.emplace_back(u, v);
    }
    return edges;
}

} // namespace oracle
