#include "doctest.h"

#include "oracles.hpp"

#include "recnav/corpus.hpp"
#include "recnav/error.hpp"
#include "recnav/network.hpp"
#include "recnav/similarity.hpp"
#include "recnav/topology.hpp"

#include <cmath>

using namespace recnav;

namespace {

std::vector<Edge> complete(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v)
            if (u != v) edges.emplace_back(u, v);
    return edges;
}

std::vector<Edge> cycle(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) edges.emplace_back(u, static_cast<NodeId>((u + 1) % n));
    return edges;
}

void check_against_oracles(std::size_t n, const std::vector<Edge>& edges) {
    const Digraph g(n, edges);
    const auto comp = strongly_connected_components(g);
    const auto r = oracle::reach(n, edges);
    const auto rep = oracle::scc_representative(r);

    // Same partition: two nodes share a label iff they share an oracle representative.
    std::vector<std::uint32_t> label_of_rep(n, UINT32_MAX);
    for (NodeId v = 0; v < n; ++v) {
        auto& l = label_of_rep[rep[v]];
        if (l == UINT32_MAX) l = comp.scc_id[v];
        CHECK(l == comp.scc_id[v]);
    }
    std::size_t distinct = 0;
    for (NodeId v = 0; v < n; ++v) distinct += rep[v] == v;
    CHECK(comp.num_scc == distinct);

    const auto core = oracle::largest_scc(r);
    CHECK(comp.largest_size() == core.size());
    CHECK(comp.scc_id[core.front()] == comp.largest);

    CHECK(std::abs(comp.clustering_coefficient - oracle::clustering(n, edges)) <= 1e-12);
    CHECK(std::abs(clustering_coefficient(g) - oracle::clustering(n, edges)) <= 1e-12);

    const auto bt = bowtie(g, comp);
    const auto expected = oracle::bowtie(n, edges);
    std::size_t total = 0;
    for (NodeId v = 0; v < n; ++v) {
        CHECK(static_cast<int>(bt.label[v]) == static_cast<int>(expected[v]));
    }
    for (auto region : kAllBowTieRegions) total += bt.size(region);
    CHECK(total == n);

    if (core.size() >= 2) {
        const auto ecc = eccentricities(g, comp);
        const auto want = oracle::eccentricities(n, edges);
        REQUIRE(ecc.nodes == core);
        for (std::size_t i = 0; i < core.size(); ++i) {
            CHECK(static_cast<int>(ecc.values[i]) == want[i]);
        }
        CHECK(static_cast<int>(ecc.diameter) == *std::max_element(want.begin(), want.end()));
        CHECK(ecc.diameter <= core.size() - 1);
    } else {
        CHECK_THROWS_AS(eccentricities(g, comp), InvalidArgument);
    }
}

} // namespace

TEST_CASE("small components") {
    SUBCASE("directed 3-cycle") {
        const auto comp = strongly_connected_components(Digraph(3, cycle(3)));
        CHECK(comp.num_scc == 1);
        CHECK(comp.largest_size() == 3);
        CHECK(comp.largest_scc_fraction == 1.0);
    }
    SUBCASE("path") {
        const auto comp = strongly_connected_components(Digraph(3, std::vector<Edge>{{0, 1}, {1, 2}}));
        CHECK(comp.num_scc == 3);
        CHECK(comp.largest_size() == 1);
        CHECK(comp.scc_id == std::vector<std::uint32_t>{0, 1, 2});
    }
}

TEST_CASE("clustering examples") {
    CHECK(clustering_coefficient(Digraph(3, complete(3))) == 1.0);
    CHECK(clustering_coefficient(Digraph(5, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}})) == 0.0);
    // Node 0 links to 1 and 2, and only 1 -> 2 exists: 1 of 2 ordered pairs, averaged over 3 nodes.
    CHECK(clustering_coefficient(Digraph(3, std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}})) ==
          doctest::Approx(0.5 / 3.0));
}

TEST_CASE("eccentricity examples") {
    for (std::size_t k : {2u, 3u, 7u}) {
        const auto ecc = eccentricities(Digraph(k, cycle(k)));
        for (auto v : ecc.values) CHECK(v == k - 1);
        CHECK(ecc.diameter == k - 1);
        CHECK(ecc.histogram() == std::map<std::uint32_t, std::size_t>{{static_cast<std::uint32_t>(k - 1), k}});
    }
    const auto full = eccentricities(Digraph(5, complete(5)));
    for (auto v : full.values) CHECK(v == 1);
    CHECK_THROWS_AS(eccentricities(Digraph(3, std::vector<Edge>{{0, 1}})), InvalidArgument);
}

TEST_CASE("bow-tie examples") {
    SUBCASE("cycle with one IN and one OUT node") {
        // a,b,c = 0,1,2; d = 3 -> a; c -> e = 4.
        const auto bt = bowtie(Digraph(5, std::vector<Edge>{{0, 1}, {1, 2}, {2, 0}, {3, 0}, {2, 4}}));
        CHECK(bt.label == std::vector<BowTieRegion>{BowTieRegion::scc, BowTieRegion::scc, BowTieRegion::scc,
                                                    BowTieRegion::in, BowTieRegion::out});
    }
    SUBCASE("a lone 2-cycle") {
        const auto bt = bowtie(Digraph(5, std::vector<Edge>{{1, 3}, {3, 1}}));
        CHECK(bt.size(BowTieRegion::scc) == 2);
        CHECK(bt.size(BowTieRegion::other) == 3);
    }
    SUBCASE("tube and tendrils") {
        // core {0,1}; IN 2; OUT 3; tube 4 (2 -> 4 -> 3); TL_IN 5 (2 -> 5); TL_OUT 6 (6 -> 3); other 7.
        const auto bt = bowtie(Digraph(8, std::vector<Edge>{{0, 1}, {1, 0}, {2, 0}, {1, 3}, {2, 4}, {4, 3}, {2, 5}, {6, 3}}));
        CHECK(bt.label == std::vector<BowTieRegion>{BowTieRegion::scc, BowTieRegion::scc, BowTieRegion::in,
                                                    BowTieRegion::out, BowTieRegion::tube, BowTieRegion::tendril_in,
                                                    BowTieRegion::tendril_out, BowTieRegion::other});
    }
}

TEST_CASE("region names") {
    std::vector<std::string> names;
    for (auto r : kAllBowTieRegions) names.emplace_back(to_string(r));
    CHECK(names == std::vector<std::string>{"SCC", "IN", "OUT", "TUBE", "TL_IN", "TL_OUT", "OTHER"});
}

TEST_CASE("components, clustering, bow-tie and eccentricity match brute-force oracles") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        check_against_oracles(150, oracle::random_out_regular(150, 1 + seed % 4, seed));
        check_against_oracles(100, oracle::random_graph(100, 0.004 + 0.002 * static_cast<double>(seed), seed));
        check_against_oracles(40, oracle::random_graph(40, 0.3, seed));
    }
    check_against_oracles(1, {});
    check_against_oracles(6, {});
}

TEST_CASE("membership change") {
    const Digraph g(5, std::vector<Edge>{{0, 1}, {1, 2}, {2, 0}, {3, 0}, {2, 4}});
    const auto bt = bowtie(g);
    SUBCASE("identical networks give a diagonal matrix") {
        const std::vector<BowTie> series{bt, bt};
        const auto m = membership_change(series);
        REQUIRE(m.size() == 1);
        for (std::size_t i = 0; i < kBowTieRegions; ++i)
            for (std::size_t j = 0; j < kBowTieRegions; ++j)
                CHECK(m[0][i][j] == (i == j ? bt.sizes[i] : 0));
    }
    SUBCASE("saturation moves every node into the SCC") {
        const std::vector<BowTie> series{bt, bowtie(Digraph(5, complete(5)))};
        const auto m = membership_change(series);
        for (std::size_t i = 0; i < kBowTieRegions; ++i)
            for (std::size_t j = 0; j < kBowTieRegions; ++j)
                CHECK(m[0][i][j] == (j == 0 ? bt.sizes[i] : 0));
    }
    SUBCASE("size mismatch") {
        const std::vector<BowTie> series{bt, bowtie(Digraph(4, complete(4)))};
        CHECK_THROWS_AS(membership_change(series), InvalidArgument);
    }
}

TEST_CASE("membership marginals agree with bow-tie sizes on a synthetic series") {
    SyntheticParams p;
    p.num_items = 300;
    p.num_users = 800;
    const auto data = generate_synthetic(p);
    const auto table = build_similarity_table(rating_features(data.ratings), 50);
    std::vector<BowTie> series;
    for (std::size_t n : {1u, 5u, 10u, 15u, 20u}) series.push_back(bowtie(build_network(table, n).graph()));
    const auto m = membership_change(series);
    REQUIRE(m.size() == 4);
    for (std::size_t t = 0; t < m.size(); ++t) {
        for (std::size_t i = 0; i < kBowTieRegions; ++i) {
            std::size_t row = 0, col = 0;
            for (std::size_t j = 0; j < kBowTieRegions; ++j) {
                row += m[t][i][j];
                col += m[t][j][i];
            }
            CHECK(row == series[t].sizes[i]);
            CHECK(col == series[t + 1].sizes[i]);
        }
    }
}

TEST_CASE("structural laws on synthetic networks") {
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        SyntheticParams p;
        p.seed = seed;
        p.num_items = 300;
        p.num_users = 800;
        const auto data = generate_synthetic(p);
        const auto table = build_similarity_table(rating_features(data.ratings), 50);
        double previous = 0.0;
        for (std::size_t n = 1; n <= 20; ++n) {
            const auto g = build_network(table, n).graph();
            const auto comp = strongly_connected_components(g);
            CHECK(comp.largest_scc_fraction >= previous);
            previous = comp.largest_scc_fraction;
            const double count = comp.largest_scc_fraction * static_cast<double>(g.size());
            CHECK(std::abs(count - std::round(count)) < 1e-9);
            if (comp.largest_size() >= 2) {
                const auto ecc = eccentricities(g, comp);
                CHECK(ecc.diameter <= comp.largest_size() - 1);
                for (auto v : ecc.values) CHECK(v >= 1);
            }
        }
    }
}
