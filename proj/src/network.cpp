#include "recnav/network.hpp"

#include "recnav/csv.hpp"
#include "recnav/error.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

namespace recnav {

std::string_view to_string(Algo algo) {
    return algo == Algo::cf ? "cf" : "cb";
}

std::string_view to_string(Diversifier diversifier) {
    switch (diversifier) {
    case Diversifier::none: return "none";
    case Diversifier::random: return "random";
    case Diversifier::diversify: return "diversify";
    case Diversifier::exprel: return "exprel";
    }
    return "none";
}

Algo parse_algo(std::string_view text) {
    if (text == "cf") return Algo::cf;
    if (text == "cb") return Algo::cb;
    throw InvalidArgument("unknown algorithm '" + std::string(text) + "' (expected cf|cb)");
}

Diversifier parse_diversifier(std::string_view text) {
    if (text == "none") return Diversifier::none;
    if (text == "random") return Diversifier::random;
    if (text == "diversify") return Diversifier::diversify;
    if (text == "exprel") return Diversifier::exprel;
    throw InvalidArgument("unknown diversifier '" + std::string(text) +
                          "' (expected none|random|diversify|exprel)");
}

RecNetwork::RecNetwork(std::size_t num_nodes, std::size_t top_n,
                       std::vector<std::vector<RecEdge>> out_edges, Provenance provenance)
    : top_n_(top_n), out_edges_(std::move(out_edges)), provenance_(provenance) {
    if (out_edges_.size() != num_nodes) {
        throw InvalidArgument("adjacency size does not match node count");
    }
    std::vector<std::size_t> mark(num_nodes, std::numeric_limits<std::size_t>::max());
    for (std::size_t u = 0; u < num_nodes; ++u) {
        const auto& edges = out_edges_[u];
        if (edges.size() > top_n_) {
            throw InvalidArgument("node " + std::to_string(u) + " has more than N out-edges");
        }
        for (std::size_t r = 0; r < edges.size(); ++r) {
            const auto& e = edges[r];
            if (e.target >= num_nodes) {
                throw InvalidArgument("edge target out of range");
            }
            if (e.target == u) {
                throw InvalidArgument("self-loop at node " + std::to_string(u));
            }
            if (mark[e.target] == u) {
                throw InvalidArgument("duplicate target at node " + std::to_string(u));
            }
            mark[e.target] = u;
            if (e.rank != r + 1) {
                throw InvalidArgument("edge ranks must run 1..degree at node " + std::to_string(u));
            }
        }
    }
}

std::size_t RecNetwork::edge_count() const {
    std::size_t m = 0;
    for (const auto& edges : out_edges_) {
        m += edges.size();
    }
    return m;
}

Digraph RecNetwork::graph() const {
    std::vector<Edge> edges;
    edges.reserve(edge_count());
    for (ItemId u = 0; u < out_edges_.size(); ++u) {
        for (const auto& e : out_edges_[u]) {
            edges.emplace_back(u, e.target);
        }
    }
    return Digraph(out_edges_.size(), edges);
}

RecNetwork build_network(const SimilarityTable& table, std::size_t n, Algo algo) {
    if (n < 1) {
        throw InvalidArgument("N must be at least 1");
    }
    if (n > table.k()) {
        throw InvalidArgument("N=" + std::to_string(n) + " exceeds similarity table depth K=" +
                              std::to_string(table.k()));
    }
    std::vector<std::vector<RecEdge>> out(table.size());
    for (ItemId u = 0; u < table.size(); ++u) {
        const auto row = table.row(u);
        const std::size_t take = std::min(n, row.size());
        for (std::size_t r = 0; r < take; ++r) {
            out[u].push_back({row[r].item, static_cast<std::uint32_t>(r + 1), row[r].score});
        }
    }
    return RecNetwork(table.size(), n, std::move(out), Provenance{algo, Diversifier::none, {}, {}});
}

void write_network_csv(std::ostream& out, const RecNetwork& net) {
    out << csv_line({"source", "target", "rank", "score"});
    for (ItemId u = 0; u < net.size(); ++u) {
        for (const auto& e : net.out_edges(u)) {
            out << csv_line({std::to_string(u), std::to_string(e.target), std::to_string(e.rank),
                             std::isnan(e.score) ? std::string() : format_double(e.score)});
        }
    }
}

RecNetwork read_network_csv(std::istream& in, const std::string& source, std::size_t num_nodes,
                            std::size_t top_n, Provenance provenance) {
    CsvReader reader(in, source);
    CsvRecord record;
    if (!reader.next(record) ||
        record.fields != std::vector<std::string>{"source", "target", "rank", "score"}) {
        throw ParseError(source, record.line, "expected header 'source,target,rank,score'");
    }
    std::vector<std::vector<RecEdge>> out(num_nodes);
    while (reader.next(record)) {
        if (record.fields.size() != 4) {
            throw ParseError(source, record.line, "expected 4 fields");
        }
        const auto u = parse_int(record.fields[0], source, record.line);
        const auto v = parse_int(record.fields[1], source, record.line);
        const auto rank = parse_int(record.fields[2], source, record.line);
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= num_nodes ||
            static_cast<std::size_t>(v) >= num_nodes || rank < 1) {
            throw ParseError(source, record.line, "edge outside the declared node range");
        }
        const double score = record.fields[3].empty()
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : parse_double(record.fields[3], source, record.line);
        out[static_cast<std::size_t>(u)].push_back(
            {static_cast<ItemId>(v), static_cast<std::uint32_t>(rank), score});
    }
    for (auto& edges : out) {
        std::sort(edges.begin(), edges.end(),
                  [](const RecEdge& a, const RecEdge& b) { return a.rank < b.rank; });
    }
    try {
        return RecNetwork(num_nodes, top_n, std::move(out), provenance);
    } catch (const InvalidArgument& e) {
        throw ParseError(source, 0, e.what());
    }
}

} // namespace recnav
