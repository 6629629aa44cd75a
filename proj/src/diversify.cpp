#include "recnav/error.hpp"
#include "recnav/network.hpp"
#include "recnav/rng.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

namespace recnav {

namespace {

void require_undiversified(const RecNetwork& net, std::string_view who) {
    if (net.provenance().diversifier != Diversifier::none) {
        throw InvalidArgument(std::string(who) + " expects an undiversified network");
    }
    if (net.top_n() < 2) {
        throw InvalidArgument(std::string(who) + " requires N >= 2");
    }
}

void require_pool_depth(const RecNetwork& net, const SimilarityTable& table, std::size_t pool_size,
                        std::string_view who) {
    if (table.size() != net.size()) {
        throw InvalidArgument(std::string(who) + ": table and network sizes differ");
    }
    // A table shallower than the pool is fine only when it already holds every other item.
    if (table.k() < pool_size && table.k() + 1 < table.size()) {
        throw InvalidArgument(std::string(who) + ": similarity table depth K=" +
                              std::to_string(table.k()) + " is below the pool size " +
                              std::to_string(pool_size));
    }
}

/// Nodes with a full list of N recommendations; shorter lists come from
/// degenerate items and are never modified.
bool is_full(const RecNetwork& net, ItemId u) {
    return net.out_edges(u).size() == net.top_n();
}

struct Candidate {
    ItemId item;
    double cosine;
};

/// Pool entries (first `pool_size` table entries) not among the retained targets.
std::vector<Candidate> candidate_pool(const SimilarityTable& table, ItemId u,
                                      std::span<const RecEdge> retained, std::size_t pool_size) {
    const auto row = table.row(u);
    const std::size_t depth = std::min(pool_size, row.size());
    std::vector<Candidate> pool;
    for (std::size_t r = 0; r < depth; ++r) {
        const ItemId c = row[r].item;
        const bool kept = std::any_of(retained.begin(), retained.end(),
                                      [c](const RecEdge& e) { return e.target == c; });
        if (!kept) {
            pool.push_back({c, row[r].score});
        }
    }
    return pool;
}

/// Argmax by score with ascending-id tie-break.
template <class Score>
const Candidate* best_candidate(const std::vector<Candidate>& pool, Score score) {
    const Candidate* best = nullptr;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const auto& c : pool) {
        const double s = score(c);
        if (!best || s > best_score || (s == best_score && c.item < best->item)) {
            best = &c;
            best_score = s;
        }
    }
    return best;
}

Provenance diversified(const RecNetwork& net, Diversifier d) {
    Provenance p = net.provenance();
    p.diversifier = d;
    return p;
}

} // namespace

RecNetwork diversify_random(const RecNetwork& net, std::uint64_t seed) {
    require_undiversified(net, "diversify_random");
    const std::size_t n = net.size();
    const std::size_t top_n = net.top_n();
    std::vector<std::vector<RecEdge>> out(n);
    std::vector<char> excluded(n, 0);
    for (ItemId u = 0; u < n; ++u) {
        const auto edges = net.out_edges(u);
        out[u].assign(edges.begin(), edges.end());
        if (!is_full(net, u)) {
            continue;
        }
        excluded[u] = 1;
        for (std::size_t r = 0; r + 1 < top_n; ++r) {
            excluded[edges[r].target] = 1;
        }
        Rng rng(derive_seed(seed, "diversify/random", u));
        ItemId pick;
        do {
            pick = static_cast<ItemId>(rng.uniform_index(n));
        } while (excluded[pick]);
        out[u].back() = {pick, static_cast<std::uint32_t>(top_n),
                         std::numeric_limits<double>::quiet_NaN()};
        excluded[u] = 0;
        for (std::size_t r = 0; r + 1 < top_n; ++r) {
            excluded[edges[r].target] = 0;
        }
    }
    Provenance p = diversified(net, Diversifier::random);
    p.seed = seed;
    return RecNetwork(n, top_n, std::move(out), p);
}

DiversifyResult diversify_ziegler(const RecNetwork& net, const SimilarityTable& table,
                                  const FeatureMatrix& features, std::size_t pool_size) {
    require_undiversified(net, "diversify_ziegler");
    require_pool_depth(net, table, pool_size, "diversify_ziegler");
    if (features.size() != net.size()) {
        throw InvalidArgument("diversify_ziegler: feature matrix and network sizes differ");
    }
    const std::size_t n = net.size();
    const std::size_t top_n = net.top_n();
    std::vector<std::vector<RecEdge>> out(n);
    std::vector<std::string> warnings;
    std::unordered_map<std::uint64_t, double> cosine_cache;
    std::vector<double> dissimilarity;
    for (ItemId u = 0; u < n; ++u) {
        const auto edges = net.out_edges(u);
        out[u].assign(edges.begin(), edges.end());
        if (!is_full(net, u)) {
            continue;
        }
        const auto retained = edges.first(top_n - 1);
        const auto pool = candidate_pool(table, u, retained, pool_size);
        if (pool.empty()) {
            warnings.push_back("node " + std::to_string(u) + ": empty candidate pool, left unmodified");
            continue;
        }
        // Popular items sit in many pools, so pair cosines are memoized. The
        // cosine is symmetric bit for bit, so the key is the unordered pair.
        dissimilarity.assign(pool.size(), 0.0);
        for (const auto& r : retained) {
            for (std::size_t i = 0; i < pool.size(); ++i) {
                const ItemId c = pool[i].item;
                const auto key = (std::uint64_t{std::min(c, r.target)} << 32) | std::max(c, r.target);
                auto [it, inserted] = cosine_cache.try_emplace(key, 0.0);
                if (inserted) {
                    it->second = features.cosine(c, r.target);
                }
                dissimilarity[i] += 1.0 - it->second;
            }
        }
        const Candidate* best = best_candidate(pool, [&](const Candidate& c) {
            const auto i = static_cast<std::size_t>(&c - pool.data());
            return dissimilarity[i] / static_cast<double>(retained.size());
        });
        out[u].back() = {best->item, static_cast<std::uint32_t>(top_n), best->cosine};
    }
    return {RecNetwork(n, top_n, std::move(out), diversified(net, Diversifier::diversify)),
            std::move(warnings)};
}

DiversifyResult diversify_exprel(const RecNetwork& net, const SimilarityTable& table, double lambda,
                                 std::size_t pool_size) {
    require_undiversified(net, "diversify_exprel");
    require_pool_depth(net, table, pool_size, "diversify_exprel");
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw InvalidArgument("diversify_exprel: lambda must lie in [0, 1]");
    }
    const std::size_t n = net.size();
    const std::size_t top_n = net.top_n();
    std::vector<std::vector<RecEdge>> out(n);
    std::vector<std::string> warnings;
    std::vector<ItemId> reach_mark(n, std::numeric_limits<ItemId>::max());
    for (ItemId u = 0; u < n; ++u) {
        const auto edges = net.out_edges(u);
        out[u].assign(edges.begin(), edges.end());
        if (!is_full(net, u)) {
            continue;
        }
        const auto retained = edges.first(top_n - 1);
        const auto pool = candidate_pool(table, u, retained, pool_size);
        if (pool.empty()) {
            warnings.push_back("node " + std::to_string(u) + ": empty candidate pool, left unmodified");
            continue;
        }

        // D = {u} + retained + out(retained), all in the undiversified network.
        reach_mark[u] = u;
        for (const auto& r : retained) {
            reach_mark[r.target] = u;
            for (const auto& e : net.out_edges(r.target)) {
                reach_mark[e.target] = u;
            }
        }

        double lo = pool.front().cosine, hi = pool.front().cosine;
        for (const auto& c : pool) {
            lo = std::min(lo, c.cosine);
            hi = std::max(hi, c.cosine);
        }
        const Candidate* best = best_candidate(pool, [&](const Candidate& c) {
            const double relevance = hi > lo ? (c.cosine - lo) / (hi - lo) : 1.0;
            const auto reach = net.out_edges(c.item);
            std::size_t fresh = 0;
            for (const auto& e : reach) {
                fresh += reach_mark[e.target] != u;
            }
            const double expansion =
                static_cast<double>(fresh) / static_cast<double>(std::max<std::size_t>(1, reach.size()));
            return (1.0 - lambda) * relevance + lambda * expansion;
        });
        out[u].back() = {best->item, static_cast<std::uint32_t>(top_n), best->cosine};
    }
    Provenance p = diversified(net, Diversifier::exprel);
    p.lambda = lambda;
    return {RecNetwork(n, top_n, std::move(out), p), std::move(warnings)};
}

} // namespace recnav
