#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace recnav {

/// Dense internal item id in [0, catalog size).
using ItemId = std::uint32_t;
using ExternalId = std::int64_t;

struct Item {
    ExternalId external_id = 0;
    std::string title;
    std::optional<int> year;         // empty = unknown
    std::vector<std::string> genres; // sorted, unique
};

/// Items ordered by ascending external id; position in that order is the
/// internal id used by every downstream module.
class ItemCatalog {
public:
    ItemCatalog() = default;

    /// Validates (unique external ids, non-empty titles), normalizes genre sets
    /// and sorts by external id. Throws InvalidArgument on violation.
    explicit ItemCatalog(std::vector<Item> items);

    std::size_t size() const noexcept { return items_.size(); }
    const Item& item(ItemId id) const { return items_.at(id); }
    std::span<const Item> items() const noexcept { return items_; }

    std::optional<ItemId> find(ExternalId external) const;
    ExternalId external_id(ItemId id) const { return items_.at(id).external_id; }

private:
    std::vector<Item> items_;
    std::unordered_map<ExternalId, ItemId> index_;
};

struct CatalogFormat {
    char delimiter = ',';
    char genre_separator = '|';
};

ItemCatalog load_catalog(const std::filesystem::path& path, const CatalogFormat& format = {});
ItemCatalog read_catalog(std::istream& in, const std::string& source,
                         const CatalogFormat& format = {});
void write_catalog(std::ostream& out, const ItemCatalog& catalog, const CatalogFormat& format = {});

/// Declared rating range; values outside it are rejected on ingestion.
struct RatingScale {
    double min = 1.0;
    double max = 5.0;
};

struct Rating {
    std::uint32_t user = 0; // dense user index
    ItemId item = 0;
    double value = 0.0;
};

/// Sparse user x item ratings. Entries are sorted by (user, item) and unique.
class RatingsMatrix {
public:
    RatingsMatrix() = default;
    RatingsMatrix(std::size_t num_items, std::vector<ExternalId> user_ids, std::vector<Rating> entries,
                  RatingScale scale);

    std::size_t num_users() const noexcept { return user_ids_.size(); }
    std::size_t num_items() const noexcept { return num_items_; }
    std::size_t size() const noexcept { return entries_.size(); }
    std::span<const Rating> entries() const noexcept { return entries_; }
    ExternalId user_external_id(std::uint32_t user) const { return user_ids_.at(user); }
    const RatingScale& scale() const noexcept { return scale_; }

    /// Number of ratings per item (index = item id).
    std::vector<std::size_t> item_counts() const;

private:
    std::size_t num_items_ = 0;
    std::vector<ExternalId> user_ids_;
    std::vector<Rating> entries_;
    RatingScale scale_;
};

/// Reads `user_id,item_id,rating` (external ids) and drops users with fewer
/// than `min_ratings` entries.
RatingsMatrix load_ratings(const std::filesystem::path& path, const ItemCatalog& catalog,
                           std::size_t min_ratings = 20, RatingScale scale = {});
RatingsMatrix read_ratings(std::istream& in, const std::string& source, const ItemCatalog& catalog,
                           std::size_t min_ratings = 20, RatingScale scale = {});
void write_ratings(std::ostream& out, const RatingsMatrix& ratings, const ItemCatalog& catalog);

/// Free text per item. Items without a document are listed in `missing()`.
class TextCorpus {
public:
    TextCorpus() = default;
    TextCorpus(std::size_t num_items, std::map<ItemId, std::string> docs);

    const std::map<ItemId, std::string>& docs() const noexcept { return docs_; }
    std::size_t num_items() const noexcept { return num_items_; }
    const std::vector<ItemId>& missing() const noexcept { return missing_; }

private:
    std::size_t num_items_ = 0;
    std::map<ItemId, std::string> docs_;
    std::vector<ItemId> missing_;
};

/// `item_id<TAB>text`, with tab, newline and backslash escaped as \t, \n, \\.
TextCorpus load_corpus(const std::filesystem::path& path, const ItemCatalog& catalog);
TextCorpus read_corpus(std::istream& in, const std::string& source, const ItemCatalog& catalog);
void write_corpus(std::ostream& out, const TextCorpus& corpus, const ItemCatalog& catalog);

struct SyntheticParams {
    std::uint64_t seed = 1;
    std::size_t num_items = 500;
    std::size_t num_users = 2000;
    double zipf_exponent = 1.0;
    std::size_t num_genres = 8;
    int year_min = 1995;
    int year_max = 2004;
    std::size_t min_user_ratings = 20;
};

struct SyntheticData {
    ItemCatalog catalog;
    RatingsMatrix ratings;
    TextCorpus corpus;
};

/// Popularity-skewed catalog, ratings and item texts; a pure function of `params`.
SyntheticData generate_synthetic(const SyntheticParams& params);

} // namespace recnav
