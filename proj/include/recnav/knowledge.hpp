#pragma once

#include "recnav/corpus.hpp"
#include "recnav/digraph.hpp"
#include "recnav/network.hpp"
#include "recnav/similarity.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace recnav {

enum class KnowledgeKind { title, neighbors, wiki_neighbors, optimal, random };

std::string_view to_string(KnowledgeKind kind);
KnowledgeKind parse_knowledge(std::string_view text);

/// Background knowledge S: score(i, j) estimates how promising candidate i is
/// when heading for target j. Immutable after construction and safe to share
/// between threads.
class KnowledgeMatrix {
public:
    /// Cosine of title TF-IDF rows.
    static KnowledgeMatrix title(const ItemCatalog& catalog);
    /// Cosine of out-adjacency indicator vectors of `g`.
    static KnowledgeMatrix neighbors(const Digraph& g, KnowledgeKind kind = KnowledgeKind::neighbors);
    /// -d(i, j) in hops, -infinity when j is unreachable from i. Precomputed.
    static KnowledgeMatrix shortest_paths(const Digraph& g);
    /// All zeros.
    static KnowledgeMatrix zero(std::size_t num_nodes);

    KnowledgeKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return size_; }

    double score(NodeId candidate, NodeId target) const;

private:
    KnowledgeKind kind_ = KnowledgeKind::random;
    std::size_t size_ = 0;
    FeatureMatrix features_;
    std::vector<std::int32_t> distance_; // [target * size + candidate]
};

/// Builds the requested kind over `net`. Title needs `catalog`; wiki_neighbors
/// needs `external` (any item graph over the same ids).
KnowledgeMatrix build_knowledge(KnowledgeKind kind, const RecNetwork& net,
                                const ItemCatalog* catalog = nullptr, const Digraph* external = nullptr);

/// Reads an external item graph from CSV `source,target` (external item ids).
/// Edges touching unknown items are rejected.
Digraph read_item_graph(std::istream& in, const std::string& source, const ItemCatalog& catalog);

} // namespace recnav
