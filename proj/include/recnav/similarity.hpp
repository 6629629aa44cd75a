#pragma once

#include "recnav/corpus.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace recnav {

struct SparseEntry {
    std::uint32_t index = 0;
    double weight = 0.0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sparse vector with strictly increasing indices and no stored zeros.
using SparseVector = std::vector<SparseEntry>;

double dot(std::span<const SparseEntry> a, std::span<const SparseEntry> b);
double l2_norm(std::span<const SparseEntry> v);

/// a.b / (|a| |b|); 0 when either vector has zero norm (see is_degenerate_pair).
double cosine(std::span<const SparseEntry> a, std::span<const SparseEntry> b);
bool is_degenerate_pair(std::span<const SparseEntry> a, std::span<const SparseEntry> b);

enum class FeatureKind { rating_vector, tfidf_vector, title_tfidf };

/// One sparse row per catalog item. Rows are validated on construction.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(FeatureKind kind, std::size_t dimensions, std::vector<SparseVector> rows);

    FeatureKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return rows_.size(); }
    std::size_t dimensions() const noexcept { return dimensions_; }
    std::span<const SparseEntry> row(ItemId id) const { return rows_.at(id); }
    double norm(ItemId id) const { return norms_.at(id); }
    bool is_zero(ItemId id) const { return norms_.at(id) == 0.0; }

    double cosine(ItemId a, ItemId b) const;

    /// Copy with one row multiplied by `factor` > 0.
    FeatureMatrix scaled_row(ItemId id, double factor) const;

private:
    FeatureKind kind_ = FeatureKind::rating_vector;
    std::size_t dimensions_ = 0;
    std::vector<SparseVector> rows_;
    std::vector<double> norms_;
};

struct TokenizerConfig {
    std::size_t min_length = 2;
};

/// Lowercases ASCII letters and splits on ASCII non-alphanumerics. Bytes >= 0x80
/// are kept inside tokens so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

struct TfidfResult {
    FeatureMatrix features;
    std::vector<std::string> vocabulary; // dimension index -> term, sorted
    std::vector<ItemId> empty_documents; // documents that produced no tokens
};

/// tf = raw count, idf = ln((1 + D) / (1 + df)) + 1, rows L2-normalized.
/// Items without a document get an empty row.
TfidfResult tfidf(const TextCorpus& corpus, const TokenizerConfig& config = {},
                  FeatureKind kind = FeatureKind::tfidf_vector);

/// TF-IDF over item titles.
TfidfResult title_tfidf(const ItemCatalog& catalog, const TokenizerConfig& config = {});

enum class RatingTransform { raw, binary };

/// Item rows over user dimensions.
FeatureMatrix rating_features(const RatingsMatrix& ratings, RatingTransform transform = RatingTransform::raw);

struct Neighbor {
    ItemId item = 0;
    double score = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Per-item ranked neighbor lists: descending score, ascending id on ties.
class SimilarityTable {
public:
    SimilarityTable() = default;
    SimilarityTable(std::size_t k, std::vector<std::vector<Neighbor>> rows, std::vector<ItemId> degenerate);

    std::size_t k() const noexcept { return k_; }
    std::size_t size() const noexcept { return rows_.size(); }
    std::span<const Neighbor> row(ItemId id) const { return rows_.at(id); }
    /// Items whose feature row has zero norm; their lists are empty.
    const std::vector<ItemId>& degenerate() const noexcept { return degenerate_; }

private:
    std::size_t k_ = 0;
    std::vector<std::vector<Neighbor>> rows_;
    std::vector<ItemId> degenerate_;
};

/// Top-`k` cosine neighbors of every non-degenerate item among the other
/// non-degenerate items. Requires 1 <= k < number of items.
SimilarityTable build_similarity_table(const FeatureMatrix& features, std::size_t k);

/// CSV `source,rank,target,score` (internal ids, rank from 1).
void write_similarity_table(std::ostream& out, const SimilarityTable& table);

} // namespace recnav
