#include "recnav/similarity.hpp"

#include "recnav/csv.hpp"
#include "recnav/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <unordered_map>

namespace recnav {

double dot(std::span<const SparseEntry> a, std::span<const SparseEntry> b) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].index == b[j].index) {
            s += a[i].weight * b[j].weight;
            ++i;
            ++j;
        } else if (a[i].index < b[j].index) {
            ++i;
        } else {
            ++j;
        }
    }
    return s;
}

double l2_norm(std::span<const SparseEntry> v) {
    double s = 0.0;
    for (const auto& e : v) {
        s += e.weight * e.weight;
    }
    return std::sqrt(s);
}

bool is_degenerate_pair(std::span<const SparseEntry> a, std::span<const SparseEntry> b) {
    return l2_norm(a) == 0.0 || l2_norm(b) == 0.0;
}

double cosine(std::span<const SparseEntry> a, std::span<const SparseEntry> b) {
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return dot(a, b) / (na * nb);
}

FeatureMatrix::FeatureMatrix(FeatureKind kind, std::size_t dimensions, std::vector<SparseVector> rows)
    : kind_(kind), dimensions_(dimensions), rows_(std::move(rows)) {
    norms_.reserve(rows_.size());
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i].index >= dimensions_) {
                throw InvalidArgument("feature index out of range");
            }
            if (i && row[i].index <= row[i - 1].index) {
                throw InvalidArgument("feature indices must be strictly increasing");
            }
            if (!(row[i].weight > 0.0)) {
                throw InvalidArgument("feature weights must be positive (zeros are not stored)");
            }
        }
        norms_.push_back(l2_norm(row));
    }
}

double FeatureMatrix::cosine(ItemId a, ItemId b) const {
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return dot(row(a), row(b)) / (na * nb);
}

FeatureMatrix FeatureMatrix::scaled_row(ItemId id, double factor) const {
    if (!(factor > 0.0)) {
        throw InvalidArgument("scale factor must be positive");
    }
    auto rows = rows_;
    for (auto& e : rows.at(id)) {
        e.weight *= factor;
    }
    return FeatureMatrix(kind_, dimensions_, std::move(rows));
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= config.min_length) {
            tokens.push_back(current);
        }
        current.clear();
    };
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z')) {
            current.push_back(ch);
        } else if (c >= 'A' && c <= 'Z') {
            current.push_back(static_cast<char>(c - 'A' + 'a'));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

TfidfResult tfidf(const TextCorpus& corpus, const TokenizerConfig& config, FeatureKind kind) {
    if (corpus.docs().empty()) {
        throw InvalidArgument("tfidf: corpus is empty");
    }
    std::vector<std::pair<ItemId, std::map<std::string, std::size_t>>> counts;
    std::map<std::string, std::size_t> document_frequency;
    for (const auto& [id, text] : corpus.docs()) {
        std::map<std::string, std::size_t> tf;
        for (auto& token : tokenize(text, config)) {
            ++tf[std::move(token)];
        }
        for (const auto& [term, _] : tf) {
            ++document_frequency[term];
        }
        counts.emplace_back(id, std::move(tf));
    }

    TfidfResult result;
    std::unordered_map<std::string, std::uint32_t> term_index;
    std::vector<double> idf;
    const double docs = static_cast<double>(corpus.docs().size());
    for (const auto& [term, df] : document_frequency) {
        term_index.emplace(term, static_cast<std::uint32_t>(result.vocabulary.size()));
        result.vocabulary.push_back(term);
        idf.push_back(std::log((1.0 + docs) / (1.0 + static_cast<double>(df))) + 1.0);
    }

    std::vector<SparseVector> rows(corpus.num_items());
    for (const auto& [id, tf] : counts) {
        if (tf.empty()) {
            result.empty_documents.push_back(id);
            continue;
        }
        SparseVector row;
        row.reserve(tf.size());
        // std::map iteration is lexicographic, which is also vocabulary index order.
        for (const auto& [term, count] : tf) {
            const auto index = term_index.at(term);
            row.push_back({index, static_cast<double>(count) * idf[index]});
        }
        const double norm = l2_norm(row);
        for (auto& e : row) {
            e.weight /= norm;
        }
        rows[id] = std::move(row);
    }
    result.features = FeatureMatrix(kind, result.vocabulary.size(), std::move(rows));
    return result;
}

TfidfResult title_tfidf(const ItemCatalog& catalog, const TokenizerConfig& config) {
    std::map<ItemId, std::string> titles;
    for (ItemId id = 0; id < catalog.size(); ++id) {
        titles.emplace(id, catalog.item(id).title);
    }
    return tfidf(TextCorpus(catalog.size(), std::move(titles)), config, FeatureKind::title_tfidf);
}

FeatureMatrix rating_features(const RatingsMatrix& ratings, RatingTransform transform) {
    std::vector<SparseVector> rows(ratings.num_items());
    // Entries are sorted by (user, item), so each item row receives ascending user indices.
    for (const auto& e : ratings.entries()) {
        const double w = transform == RatingTransform::binary ? 1.0 : e.value;
        if (w > 0.0) {
            rows[e.item].push_back({e.user, w});
        }
    }
    return FeatureMatrix(FeatureKind::rating_vector, ratings.num_users(), std::move(rows));
}

SimilarityTable::SimilarityTable(std::size_t k, std::vector<std::vector<Neighbor>> rows,
                                 std::vector<ItemId> degenerate)
    : k_(k), rows_(std::move(rows)), degenerate_(std::move(degenerate)) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& row = rows_[i];
        if (row.size() > k_) {
            throw InvalidArgument("similarity row longer than k");
        }
        for (std::size_t r = 0; r < row.size(); ++r) {
            if (row[r].item == i || row[r].item >= rows_.size()) {
                throw InvalidArgument("similarity row lists itself or an unknown item");
            }
            if (r && (row[r - 1].score < row[r].score ||
                      (row[r - 1].score == row[r].score && row[r - 1].item >= row[r].item))) {
                throw InvalidArgument("similarity row is not in ranked order");
            }
        }
    }
}

SimilarityTable build_similarity_table(const FeatureMatrix& features, std::size_t k) {
    const std::size_t n = features.size();
    if (k < 1 || k >= n) {
        throw InvalidArgument("similarity table depth k=" + std::to_string(k) +
                              " must satisfy 1 <= k < " + std::to_string(n));
    }

    // Inverted index: dimension -> (item, weight), items ascending.
    std::vector<std::vector<std::pair<ItemId, double>>> postings(features.dimensions());
    std::vector<ItemId> degenerate;
    for (ItemId i = 0; i < n; ++i) {
        if (features.is_zero(i)) {
            degenerate.push_back(i);
            continue;
        }
        for (const auto& e : features.row(i)) {
            postings[e.index].emplace_back(i, e.weight);
        }
    }

    auto ranked_before = [](const Neighbor& a, const Neighbor& b) {
        return a.score != b.score ? a.score > b.score : a.item < b.item;
    };

    std::vector<std::vector<Neighbor>> rows(n);
    std::vector<double> acc(n, 0.0);
    std::vector<Neighbor> candidates;
    candidates.reserve(n);
    for (ItemId i = 0; i < n; ++i) {
        if (features.is_zero(i)) {
            continue;
        }
        std::fill(acc.begin(), acc.end(), 0.0);
        // Accumulation visits shared dimensions in ascending order, the same
        // summation order as dot(), so scores equal cosine() bit for bit.
        for (const auto& e : features.row(i)) {
            for (const auto& [j, w] : postings[e.index]) {
                acc[j] += e.weight * w;
            }
        }
        candidates.clear();
        const double ni = features.norm(i);
        for (ItemId j = 0; j < n; ++j) {
            if (j == i || features.is_zero(j)) {
                continue;
            }
            candidates.push_back({j, acc[j] / (ni * features.norm(j))});
        }
        const std::size_t take = std::min(k, candidates.size());
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                          candidates.end(), ranked_before);
        rows[i].assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take));
    }
    return SimilarityTable(k, std::move(rows), std::move(degenerate));
}

void write_similarity_table(std::ostream& out, const SimilarityTable& table) {
    out << csv_line({"source", "rank", "target", "score"});
    for (ItemId i = 0; i < table.size(); ++i) {
        const auto row = table.row(i);
        for (std::size_t r = 0; r < row.size(); ++r) {
            out << csv_line({std::to_string(i), std::to_string(r + 1), std::to_string(row[r].item),
                             format_double(row[r].score)});
        }
    }
}

} // namespace recnav
