#include "recnav/corpus.hpp"
#include "recnav/error.hpp"
#include "recnav/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

namespace recnav {

namespace {

constexpr std::size_t kGenreVocabulary = 16;
constexpr std::size_t kGeneralVocabulary = 150;
constexpr double kGenreAffinity = 4.0;
constexpr double kSecondaryGenreRate = 0.25;
constexpr double kUnknownYearRate = 0.02;

const char* const kGenreNames[] = {"drama",  "comedy",  "thriller", "romance", "western", "horror",
                                   "scifi",  "fantasy", "mystery",  "musical", "crime",   "war",
                                   "family", "sports",  "history",  "noir"};

std::string genre_name(std::size_t g) {
    if (g < std::size(kGenreNames)) {
        return kGenreNames[g];
    }
    return "genre" + std::to_string(g + 1);
}

std::string make_word(Rng& rng) {
    static constexpr std::string_view consonants = "bdfgklmnprstvz";
    static constexpr std::string_view vowels = "aeiou";
    const std::size_t syllables = 2 + rng.uniform_index(2);
    std::string word;
    for (std::size_t s = 0; s < syllables; ++s) {
        word.push_back(consonants[rng.uniform_index(consonants.size())]);
        word.push_back(vowels[rng.uniform_index(vowels.size())]);
    }
    return word;
}

/// Draws `count` distinct pseudo-words not present in `taken`.
std::vector<std::string> make_vocabulary(Rng& rng, std::size_t count, std::set<std::string>& taken) {
    std::vector<std::string> words;
    while (words.size() < count) {
        auto w = make_word(rng);
        if (taken.insert(w).second) {
            words.push_back(std::move(w));
        }
    }
    return words;
}

std::string capitalized(std::string word) {
    if (!word.empty()) {
        word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    }
    return word;
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& pool) {
    return pool[rng.uniform_index(pool.size())];
}

} // namespace

SyntheticData generate_synthetic(const SyntheticParams& p) {
    if (p.num_items < 10 || p.num_users < 10) {
        throw InvalidArgument("synthetic data needs at least 10 items and 10 users");
    }
    if (p.num_genres == 0) {
        throw InvalidArgument("synthetic data needs at least one genre");
    }
    if (p.year_min > p.year_max) {
        throw InvalidArgument("year range is empty");
    }
    if (!(p.zipf_exponent >= 0.0)) {
        throw InvalidArgument("zipf exponent must be non-negative");
    }
    if (p.num_items < p.min_user_ratings) {
        throw InvalidArgument("parameters leave users with fewer than " +
                              std::to_string(p.min_user_ratings) + " possible ratings");
    }

    const std::size_t n = p.num_items;
    const std::size_t genres = p.num_genres;

    Rng vocab_rng(derive_seed(p.seed, "synthetic/vocabulary"));
    std::set<std::string> taken;
    for (std::size_t g = 0; g < genres; ++g) {
        taken.insert(genre_name(g));
    }
    std::vector<std::vector<std::string>> genre_words(genres);
    for (auto& words : genre_words) {
        words = make_vocabulary(vocab_rng, kGenreVocabulary, taken);
    }
    const auto general_words = make_vocabulary(vocab_rng, kGeneralVocabulary, taken);

    // Items: primary genre round-robin so genre sizes are balanced.
    Rng item_rng(derive_seed(p.seed, "synthetic/items"));
    std::vector<std::size_t> primary(n);
    std::vector<std::optional<std::size_t>> secondary(n);
    std::vector<Item> items(n);
    for (std::size_t i = 0; i < n; ++i) {
        primary[i] = i % genres;
        if (genres > 1 && item_rng.uniform01() < kSecondaryGenreRate) {
            const std::size_t other = (primary[i] + 1 + item_rng.uniform_index(genres - 1)) % genres;
            secondary[i] = other;
        }
        auto& item = items[i];
        item.external_id = static_cast<ExternalId>(i + 1);
        item.genres.push_back(genre_name(primary[i]));
        if (secondary[i]) {
            item.genres.push_back(genre_name(*secondary[i]));
        }
        if (item_rng.uniform01() >= kUnknownYearRate) {
            const auto span = static_cast<std::size_t>(p.year_max - p.year_min) + 1;
            item.year = p.year_min + static_cast<int>(item_rng.uniform_index(span));
        }
        std::vector<std::string> title{capitalized(pick(item_rng, genre_words[primary[i]]))};
        if (item_rng.uniform01() < 0.5) {
            title.push_back(capitalized(pick(item_rng, genre_words[primary[i]])));
        }
        if (secondary[i]) {
            title.push_back(capitalized(pick(item_rng, genre_words[*secondary[i]])));
        }
        if (item_rng.uniform01() < 0.5) {
            title.push_back(capitalized(pick(item_rng, general_words)));
        }
        for (const auto& w : title) {
            item.title += (item.title.empty() ? "" : " ") + w;
        }
    }

    // Popularity: Zipf weight over a random rank permutation, independent of genre.
    Rng pop_rng(derive_seed(p.seed, "synthetic/popularity"));
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    pop_rng.shuffle(rank.begin(), rank.end());
    std::vector<double> popularity(n), quality(n);
    for (std::size_t i = 0; i < n; ++i) {
        popularity[i] = std::pow(static_cast<double>(rank[i] + 1), -p.zipf_exponent);
        quality[i] = pop_rng.normal(3.4, 0.6);
    }

    // Users sample items without replacement (Efraimidis-Spirakis keys).
    Rng user_rng(derive_seed(p.seed, "synthetic/ratings"));
    std::vector<Rating> entries;
    std::vector<ExternalId> user_ids(p.num_users);
    std::vector<std::pair<double, ItemId>> keys(n);
    for (std::size_t u = 0; u < p.num_users; ++u) {
        user_ids[u] = static_cast<ExternalId>(u + 1);
        const std::size_t favourite = user_rng.uniform_index(genres);
        const double bias = user_rng.normal(0.0, 0.4);
        double extra = -std::log(1.0 - user_rng.uniform01()) * 15.0;
        const std::size_t count =
            std::min(n, p.min_user_ratings + static_cast<std::size_t>(std::floor(extra)));
        for (std::size_t i = 0; i < n; ++i) {
            const double weight = popularity[i] * (primary[i] == favourite ? kGenreAffinity : 1.0);
            double r = user_rng.uniform01();
            while (r <= 0.0) {
                r = user_rng.uniform01();
            }
            keys[i] = {std::log(r) / weight, static_cast<ItemId>(i)};
        }
        std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(count), keys.end(),
                          [](const auto& a, const auto& b) {
                              return a.first != b.first ? a.first > b.first : a.second < b.second;
                          });
        for (std::size_t k = 0; k < count; ++k) {
            const ItemId item = keys[k].second;
            const double affinity = primary[item] == favourite ? 0.5 : 0.0;
            const double raw = quality[item] + bias + affinity + user_rng.normal(0.0, 0.8);
            const double value = std::clamp(std::round(raw), 1.0, 5.0);
            entries.push_back({static_cast<std::uint32_t>(u), item, value});
        }
    }

    // Documents: bags of genre, item-specific and general words.
    Rng doc_rng(derive_seed(p.seed, "synthetic/documents"));
    std::map<ItemId, std::string> docs;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> own{pick(doc_rng, general_words), pick(doc_rng, general_words),
                                     pick(doc_rng, general_words)};
        const std::size_t length = 40 + doc_rng.uniform_index(41);
        std::string text = genre_name(primary[i]);
        for (std::size_t t = 0; t < length; ++t) {
            const double r = doc_rng.uniform01();
            const std::string* word;
            if (r < 0.45) {
                word = &pick(doc_rng, genre_words[primary[i]]);
            } else if (r < 0.60) {
                word = &pick(doc_rng, genre_words[secondary[i].value_or(primary[i])]);
            } else if (r < 0.75) {
                word = &pick(doc_rng, own);
            } else {
                word = &pick(doc_rng, general_words);
            }
            text += ' ';
            text += *word;
        }
        docs.emplace(static_cast<ItemId>(i), std::move(text));
    }

    SyntheticData data;
    data.catalog = ItemCatalog(std::move(items));
    data.ratings = RatingsMatrix(n, std::move(user_ids), std::move(entries), RatingScale{1.0, 5.0});
    data.corpus = TextCorpus(n, std::move(docs));
    return data;
}

} // namespace recnav
