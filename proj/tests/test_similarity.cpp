#include "doctest.h"

#include "recnav/corpus.hpp"
#include "recnav/error.hpp"
#include "recnav/rng.hpp"
#include "recnav/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

using namespace recnav;

namespace {

SparseVector dense_to_sparse(const std::vector<double>& v) {
    SparseVector out;
    for (std::uint32_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0.0) out.push_back({i, v[i]});
    }
    return out;
}

FeatureMatrix matrix_of(const std::vector<std::vector<double>>& rows) {
    std::vector<SparseVector> sparse;
    std::size_t dims = 0;
    for (const auto& r : rows) {
        sparse.push_back(dense_to_sparse(r));
        dims = std::max(dims, r.size());
    }
    return FeatureMatrix(FeatureKind::rating_vector, dims, std::move(sparse));
}

/// Random integer-valued sparse rows (ratings-like); a few rows stay empty.
std::vector<std::vector<double>> random_rows(std::size_t n, std::size_t dims, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> rows(n, std::vector<double>(dims, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 37 == 5) continue;
        for (std::size_t d = 0; d < dims; ++d) {
            if (rng.uniform01() < 0.15) rows[i][d] = static_cast<double>(1 + rng.uniform_index(5));
        }
    }
    return rows;
}

/// Cosine straight from dense arrays.
double dense_cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0 || bb == 0) return 0.0;
    return ab / (std::sqrt(aa) * std::sqrt(bb));
}

/// Full-sort top-k table over dense rows.
std::vector<std::vector<Neighbor>> brute_table(const std::vector<std::vector<double>>& rows, std::size_t k) {
    const auto zero = [](const std::vector<double>& r) {
        return std::all_of(r.begin(), r.end(), [](double x) { return x == 0.0; });
    };
    std::vector<std::vector<Neighbor>> table(rows.size());
    for (ItemId i = 0; i < rows.size(); ++i) {
        if (zero(rows[i])) continue;
        std::vector<Neighbor> all;
        for (ItemId j = 0; j < rows.size(); ++j) {
            if (j != i && !zero(rows[j])) all.push_back({j, dense_cosine(rows[i], rows[j])});
        }
        std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
            return a.score != b.score ? a.score > b.score : a.item < b.item;
        });
        all.resize(std::min(k, all.size()));
        table[i] = all;
    }
    return table;
}

} // namespace

TEST_CASE("cosine basics") {
    const SparseVector v{{0, 1.0}, {3, 2.5}, {7, 0.25}};
    CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine(SparseVector{{0, 1.0}}, SparseVector{{1, 1.0}}) == 0.0);
    CHECK(cosine(dense_to_sparse({1, 2, 3}), dense_to_sparse({4, 5, 6})) == doctest::Approx(0.9746318).epsilon(1e-6));
    CHECK(std::abs(cosine(dense_to_sparse({1, 2, 3}), dense_to_sparse({4, 5, 6})) - 32.0 / std::sqrt(14.0 * 77.0)) < 1e-15);
    CHECK(cosine(SparseVector{}, v) == 0.0);
    CHECK(is_degenerate_pair(SparseVector{}, v));
    CHECK_FALSE(is_degenerate_pair(v, v));
}

TEST_CASE("feature matrix validates its rows") {
    CHECK_THROWS_AS(FeatureMatrix(FeatureKind::rating_vector, 5, {{{2, 1.0}, {1, 1.0}}}), InvalidArgument);
    CHECK_THROWS_AS(FeatureMatrix(FeatureKind::rating_vector, 5, {{{1, 0.0}}}), InvalidArgument);
    CHECK_THROWS_AS(FeatureMatrix(FeatureKind::rating_vector, 5, {{{9, 1.0}}}), InvalidArgument);
}

TEST_CASE("tokenizer lowercases and splits on non-alphanumerics") {
    CHECK(tokenize("The Matrix: Reloaded (2003) a-b x") ==
          std::vector<std::string>{"the", "matrix", "reloaded", "2003"});
    CHECK(tokenize("  ").empty());
    CHECK(tokenize("a b", TokenizerConfig{1}) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tf-idf matches a straight-from-formula oracle") {
    const std::vector<std::string> docs{
        "the cat sat on the mat",
        "The dog sat on the log; the dog barked.",
        "cats and dogs: natural enemies?",
        "a mat, a log, a cat",
        "Quantum mechanics of the cat",
    };
    std::map<ItemId, std::string> by_id;
    for (ItemId i = 0; i < docs.size(); ++i) by_id[i] = docs[i];
    const auto result = tfidf(TextCorpus(docs.size(), by_id));

    // Oracle: hand-rolled tokenization, counts and weights.
    std::vector<std::map<std::string, double>> tf(docs.size());
    std::map<std::string, double> df;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::string word;
        auto flush = [&] {
            if (word.size() >= 2) tf[d][word] += 1;
            word.clear();
        };
        for (char ch : docs[d]) {
            if (std::isalnum(static_cast<unsigned char>(ch))) word += static_cast<char>(std::tolower(ch));
            else flush();
        }
        flush();
        for (const auto& [t, c] : tf[d]) df[t] += 1;
    }
    REQUIRE(result.vocabulary.size() == df.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::map<std::string, double> w;
        double norm = 0;
        for (const auto& [t, c] : tf[d]) {
            w[t] = c * (std::log((1.0 + 5.0) / (1.0 + df[t])) + 1.0);
            norm += w[t] * w[t];
        }
        norm = std::sqrt(norm);
        const auto row = result.features.row(static_cast<ItemId>(d));
        REQUIRE(row.size() == w.size());
        for (const auto& e : row) {
            const auto& term = result.vocabulary.at(e.index);
            CHECK(std::abs(e.weight - w.at(term) / norm) < 1e-9);
        }
        CHECK(std::abs(result.features.norm(static_cast<ItemId>(d)) - 1.0) < 1e-9);
    }
}

TEST_CASE("tf-idf edge cases") {
    const auto same = tfidf(TextCorpus(2, {{0, "alpha beta gamma"}, {1, "alpha beta gamma"}}));
    CHECK(same.features.cosine(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    const auto disjoint = tfidf(TextCorpus(2, {{0, "alpha beta"}, {1, "gamma delta"}}));
    CHECK(disjoint.features.cosine(0, 1) == 0.0);
    const auto empty = tfidf(TextCorpus(3, {{0, "alpha"}, {1, "? ! x"}}));
    CHECK(empty.empty_documents == std::vector<ItemId>{1});
    CHECK(empty.features.is_zero(1));
    CHECK(empty.features.is_zero(2)); // item without a document
}

TEST_CASE("similarity table small examples") {
    SUBCASE("stated cosines via explicit vectors") {
        // Rows chosen so the pairwise cosines are 0-1: 0.9, 0-2: 0.1, 1-2: 0.5 (Gram factorization).
        const double g01 = 0.9, g02 = 0.1, g12 = 0.5;
        const double b1 = std::sqrt(1 - g01 * g01);
        const double c1 = (g12 - g01 * g02) / b1;
        const double c2 = std::sqrt(1 - g02 * g02 - c1 * c1);
        const auto features = matrix_of({{1, 0, 0}, {g01, b1, 0}, {g02, c1, c2}});
        CHECK(features.cosine(0, 1) == doctest::Approx(0.9));
        CHECK(features.cosine(0, 2) == doctest::Approx(0.1));
        CHECK(features.cosine(1, 2) == doctest::Approx(0.5));
        const auto table = build_similarity_table(features, 1);
        CHECK(table.row(0)[0].item == 1);
        CHECK(table.row(1)[0].item == 0);
        CHECK(table.row(2)[0].item == 1);
    }
    SUBCASE("identical rows tie-break by id") {
        const auto features = matrix_of({{1, 2}, {1, 2}, {1, 2}, {1, 2}, {1, 2}});
        const auto table = build_similarity_table(features, 2);
        for (ItemId i = 0; i < 5; ++i) {
            std::vector<ItemId> expected;
            for (ItemId j = 0; j < 5 && expected.size() < 2; ++j) {
                if (j != i) expected.push_back(j);
            }
            REQUIRE(table.row(i).size() == 2);
            CHECK(table.row(i)[0].item == expected[0]);
            CHECK(table.row(i)[1].item == expected[1]);
            CHECK(table.row(i)[0].score == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("degenerate items and bounds") {
        const auto features = matrix_of({{1, 0}, {0, 0}, {1, 1}, {0, 1}});
        const auto table = build_similarity_table(features, 3);
        CHECK(table.degenerate() == std::vector<ItemId>{1});
        CHECK(table.row(1).empty());
        for (ItemId i : {0u, 2u, 3u}) {
            for (const auto& nb : table.row(i)) CHECK(nb.item != 1);
        }
        CHECK_THROWS_AS(build_similarity_table(features, 4), InvalidArgument);
        CHECK_THROWS_AS(build_similarity_table(features, 0), InvalidArgument);
    }
}

TEST_CASE("similarity table equals a brute-force full sort") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto rows = random_rows(200, 60, seed);
        const auto table = build_similarity_table(matrix_of(rows), 50);
        const auto oracle = brute_table(rows, 50);
        for (ItemId i = 0; i < rows.size(); ++i) {
            const auto got = table.row(i);
            REQUIRE(got.size() == oracle[i].size());
            for (std::size_t r = 0; r < got.size(); ++r) {
                CHECK(got[r].item == oracle[i][r].item);
                CHECK(std::abs(got[r].score - oracle[i][r].score) < 1e-12);
            }
        }
    }
}

TEST_CASE("similarity properties") {
    const auto rows = random_rows(120, 40, 9);
    const auto features = matrix_of(rows);
    const auto table = build_similarity_table(features, 30);

    SUBCASE("symmetry of the measure") {
        for (ItemId i = 0; i < rows.size(); ++i) {
            for (ItemId j = 0; j < rows.size(); ++j) {
                CHECK(std::abs(features.cosine(i, j) - features.cosine(j, i)) < 1e-12);
            }
        }
    }
    SUBCASE("listed scores equal the cosine") {
        for (ItemId i = 0; i < rows.size(); ++i) {
            for (const auto& nb : table.row(i)) {
                CHECK(std::abs(nb.score - features.cosine(i, nb.item)) < 1e-9);
                CHECK(nb.item != i);
            }
        }
    }
    SUBCASE("prefix nesting across depths") {
        for (std::size_t k = 1; k < 30; k += 7) {
            const auto shallow = build_similarity_table(features, k);
            for (ItemId i = 0; i < rows.size(); ++i) {
                const auto a = shallow.row(i);
                const auto b = table.row(i);
                REQUIRE(a.size() <= b.size());
                for (std::size_t r = 0; r < a.size(); ++r) CHECK(a[r].item == b[r].item);
            }
        }
    }
    SUBCASE("scaling a row keeps every ordering") {
        for (ItemId scaled : {0u, 17u, 63u}) {
            for (double factor : {0.001, 3.0, 1e6}) {
                const auto other = build_similarity_table(features.scaled_row(scaled, factor), 30);
                for (ItemId i = 0; i < rows.size(); ++i) {
                    const auto a = table.row(i);
                    const auto b = other.row(i);
                    REQUIRE(a.size() == b.size());
                    for (std::size_t r = 0; r < a.size(); ++r) {
                        // Exact ties may only reorder if the scaled scores drift by rounding.
                        if (a[r].item != b[r].item) {
                            CHECK(std::abs(a[r].score - b[r].score) < 1e-12);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("rating features use raw or binary values over user dimensions") {
    std::vector<Item> items;
    for (int i = 1; i <= 3; ++i) items.push_back({i, "t" + std::to_string(i), 2000, {"g"}});
    const ItemCatalog catalog(items);
    std::istringstream in("user_id,item_id,rating\n1,1,5\n1,2,1\n2,2,3\n");
    const auto ratings = read_ratings(in, "r.csv", catalog, 0);
    const auto raw = rating_features(ratings);
    CHECK(raw.dimensions() == 2);
    CHECK(raw.row(0).size() == 1);
    CHECK(raw.row(1)[0].weight == 1.0);
    CHECK(raw.row(1)[1].weight == 3.0);
    CHECK(raw.is_zero(2));
    const auto binary = rating_features(ratings, RatingTransform::binary);
    CHECK(binary.row(1)[0].weight == 1.0);
    CHECK(binary.row(1)[1].weight == 1.0);
}
