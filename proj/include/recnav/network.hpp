#pragma once

#include "recnav/corpus.hpp"
#include "recnav/digraph.hpp"
#include "recnav/similarity.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace recnav {

enum class Algo { cf, cb };
enum class Diversifier { none, random, diversify, exprel };

std::string_view to_string(Algo algo);
std::string_view to_string(Diversifier diversifier);
Algo parse_algo(std::string_view text);
Diversifier parse_diversifier(std::string_view text);

struct Provenance {
    Algo algo = Algo::cf;
    Diversifier diversifier = Diversifier::none;
    std::optional<double> lambda;
    std::optional<std::uint64_t> seed;
};

/// A ranked recommendation link. `score` is the source-target similarity, or
/// NaN when the target was not chosen by similarity (random replacement).
struct RecEdge {
    ItemId target = 0;
    std::uint32_t rank = 0; // 1-based
    double score = 0.0;
};

/// Top-N recommendation network: every item links to (at most) its N ranked
/// recommendations.
class RecNetwork {
public:
    RecNetwork() = default;

    /// Throws InvalidArgument unless out-degree <= top_n, ranks run 1..degree,
    /// and there are no self-loops or duplicate targets.
    RecNetwork(std::size_t num_nodes, std::size_t top_n, std::vector<std::vector<RecEdge>> out_edges,
               Provenance provenance);

    std::size_t size() const noexcept { return out_edges_.size(); }
    std::size_t top_n() const noexcept { return top_n_; }
    std::span<const RecEdge> out_edges(ItemId u) const { return out_edges_.at(u); }
    const Provenance& provenance() const noexcept { return provenance_; }
    std::size_t edge_count() const;

    /// Adjacency view with out-lists in rank order.
    Digraph graph() const;

private:
    std::size_t top_n_ = 0;
    std::vector<std::vector<RecEdge>> out_edges_;
    Provenance provenance_;
};

/// Links every item to the first `n` entries of its similarity row.
/// Requires 1 <= n <= table.k().
RecNetwork build_network(const SimilarityTable& table, std::size_t n, Algo algo = Algo::cf);

/// Replaces each node's rank-N link by a uniformly drawn item outside the
/// source and its retained N-1 targets. Node u draws from stream (seed, u).
RecNetwork diversify_random(const RecNetwork& net, std::uint64_t seed);

struct DiversifyResult {
    RecNetwork network;
    std::vector<std::string> warnings;
};

/// Picks the rank-N replacement from the node's top-`pool_size` table entries
/// maximizing the mean dissimilarity (1 - cosine) to the retained N-1 items.
DiversifyResult diversify_ziegler(const RecNetwork& net, const SimilarityTable& table,
                                  const FeatureMatrix& features, std::size_t pool_size = 50);

/// Picks the rank-N replacement maximizing
///   (1 - lambda) * rel(c) + lambda * |out(c) \ D| / max(1, |out(c)|)
/// where rel is the cosine min-max rescaled over the candidates and D holds the
/// source, its retained items and their out-neighbors in `net`.
DiversifyResult diversify_exprel(const RecNetwork& net, const SimilarityTable& table,
                                 double lambda = 0.5, std::size_t pool_size = 50);

/// CSV `source,target,rank,score`; empty score for NaN.
void write_network_csv(std::ostream& out, const RecNetwork& net);
RecNetwork read_network_csv(std::istream& in, const std::string& source, std::size_t num_nodes,
                            std::size_t top_n, Provenance provenance);

} // namespace recnav
