#include "recnav/knowledge.hpp"

#include "recnav/csv.hpp"
#include "recnav/error.hpp"

#include <algorithm>
#include <istream>
#include <limits>

namespace recnav {

std::string_view to_string(KnowledgeKind kind) {
    switch (kind) {
    case KnowledgeKind::title: return "title";
    case KnowledgeKind::neighbors: return "neighbors";
    case KnowledgeKind::wiki_neighbors: return "wiki_neighbors";
    case KnowledgeKind::optimal: return "optimal";
    case KnowledgeKind::random: return "random";
    }
    return "random";
}

KnowledgeKind parse_knowledge(std::string_view text) {
    for (auto k : {KnowledgeKind::title, KnowledgeKind::neighbors, KnowledgeKind::wiki_neighbors,
                   KnowledgeKind::optimal, KnowledgeKind::random}) {
        if (text == to_string(k)) {
            return k;
        }
    }
    throw InvalidArgument("unknown knowledge kind '" + std::string(text) +
                          "' (expected title|neighbors|wiki_neighbors|optimal|random)");
}

KnowledgeMatrix KnowledgeMatrix::title(const ItemCatalog& catalog) {
    KnowledgeMatrix k;
    k.kind_ = KnowledgeKind::title;
    k.size_ = catalog.size();
    k.features_ = title_tfidf(catalog).features;
    return k;
}

KnowledgeMatrix KnowledgeMatrix::neighbors(const Digraph& g, KnowledgeKind kind) {
    std::vector<SparseVector> rows(g.size());
    for (NodeId u = 0; u < g.size(); ++u) {
        std::vector<NodeId> targets(g.out(u).begin(), g.out(u).end());
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (NodeId v : targets) {
            rows[u].push_back({v, 1.0});
        }
    }
    KnowledgeMatrix k;
    k.kind_ = kind;
    k.size_ = g.size();
    k.features_ = FeatureMatrix(FeatureKind::rating_vector, g.size(), std::move(rows));
    return k;
}

KnowledgeMatrix KnowledgeMatrix::shortest_paths(const Digraph& g) {
    KnowledgeMatrix k;
    k.kind_ = KnowledgeKind::optimal;
    k.size_ = g.size();
    k.distance_.resize(g.size() * g.size());
    for (NodeId target = 0; target < g.size(); ++target) {
        const auto dist = bfs_distances(g, target, /*reverse=*/true);
        std::copy(dist.begin(), dist.end(), k.distance_.begin() + static_cast<std::ptrdiff_t>(target * g.size()));
    }
    return k;
}

KnowledgeMatrix KnowledgeMatrix::zero(std::size_t num_nodes) {
    KnowledgeMatrix k;
    k.kind_ = KnowledgeKind::random;
    k.size_ = num_nodes;
    return k;
}

double KnowledgeMatrix::score(NodeId candidate, NodeId target) const {
    switch (kind_) {
    case KnowledgeKind::random:
        return 0.0;
    case KnowledgeKind::optimal: {
        const auto d = distance_[static_cast<std::size_t>(target) * size_ + candidate];
        return d < 0 ? -std::numeric_limits<double>::infinity() : -static_cast<double>(d);
    }
    default:
        return features_.cosine(candidate, target);
    }
}

KnowledgeMatrix build_knowledge(KnowledgeKind kind, const RecNetwork& net, const ItemCatalog* catalog,
                                const Digraph* external) {
    switch (kind) {
    case KnowledgeKind::title:
        if (!catalog) {
            throw InvalidArgument("title knowledge requires the item catalog");
        }
        if (catalog->size() != net.size()) {
            throw InvalidArgument("catalog and network sizes differ");
        }
        return KnowledgeMatrix::title(*catalog);
    case KnowledgeKind::neighbors:
        return KnowledgeMatrix::neighbors(net.graph());
    case KnowledgeKind::wiki_neighbors:
        if (!external) {
            throw InvalidArgument("wiki_neighbors knowledge requires an external item graph");
        }
        if (external->size() != net.size()) {
            throw InvalidArgument("external graph and network sizes differ");
        }
        return KnowledgeMatrix::neighbors(*external, KnowledgeKind::wiki_neighbors);
    case KnowledgeKind::optimal:
        return KnowledgeMatrix::shortest_paths(net.graph());
    case KnowledgeKind::random:
        return KnowledgeMatrix::zero(net.size());
    }
    throw InvalidArgument("unknown knowledge kind");
}

Digraph read_item_graph(std::istream& in, const std::string& source, const ItemCatalog& catalog) {
    CsvReader reader(in, source);
    CsvRecord record;
    if (!reader.next(record) || record.fields != std::vector<std::string>{"source", "target"}) {
        throw ParseError(source, record.line, "expected header 'source,target'");
    }
    std::vector<Edge> edges;
    while (reader.next(record)) {
        if (record.fields.size() != 2) {
            throw ParseError(source, record.line, "expected 2 fields");
        }
        const auto u = catalog.find(parse_int(record.fields[0], source, record.line));
        const auto v = catalog.find(parse_int(record.fields[1], source, record.line));
        if (!u || !v) {
            throw ParseError(source, record.line, "edge references an unknown item");
        }
        if (*u != *v) {
            edges.emplace_back(*u, *v);
        }
    }
    return Digraph(catalog.size(), edges);
}

} // namespace recnav
