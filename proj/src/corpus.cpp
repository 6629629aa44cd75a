#include "recnav/corpus.hpp"

#include "recnav/csv.hpp"
#include "recnav/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace recnav {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    if (text.empty()) {
        return parts;
    }
    std::size_t begin = 0;
    for (;;) {
        const auto pos = text.find(sep, begin);
        parts.push_back(text.substr(begin, pos - begin));
        if (pos == std::string::npos) {
            break;
        }
        begin = pos + 1;
    }
    return parts;
}

void normalize_genres(std::vector<std::string>& genres) {
    std::erase_if(genres, [](const std::string& g) { return g.empty(); });
    std::sort(genres.begin(), genres.end());
    genres.erase(std::unique(genres.begin(), genres.end()), genres.end());
}

void expect_header(const CsvRecord& record, const std::vector<std::string>& expected,
                   const std::string& source) {
    if (record.fields != expected) {
        std::string want;
        for (const auto& f : expected) {
            want += (want.empty() ? "" : ",") + f;
        }
        throw ParseError(source, record.line, "expected header '" + want + "'");
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open input file: " + path.string());
    }
    return in;
}

std::string unescape_text(std::string_view text, const std::string& source, std::size_t line) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '\\') {
            out.push_back(text[i]);
            continue;
        }
        if (i + 1 == text.size()) {
            throw ParseError(source, line, "dangling escape");
        }
        switch (text[++i]) {
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case '\\': out.push_back('\\'); break;
        default: throw ParseError(source, line, "unknown escape sequence");
        }
    }
    return out;
}

std::string escape_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\\': out += "\\\\"; break;
        case '\r': break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

ItemCatalog::ItemCatalog(std::vector<Item> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end(),
              [](const Item& a, const Item& b) { return a.external_id < b.external_id; });
    index_.reserve(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
        auto& item = items_[i];
        if (item.title.empty()) {
            throw InvalidArgument("item " + std::to_string(item.external_id) + " has an empty title");
        }
        normalize_genres(item.genres);
        if (!index_.emplace(item.external_id, static_cast<ItemId>(i)).second) {
            throw InvalidArgument("duplicate item id " + std::to_string(item.external_id));
        }
    }
}

std::optional<ItemId> ItemCatalog::find(ExternalId external) const {
    auto it = index_.find(external);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

ItemCatalog load_catalog(const std::filesystem::path& path, const CatalogFormat& format) {
    auto in = open_input(path);
    return read_catalog(in, path.string(), format);
}

ItemCatalog read_catalog(std::istream& in, const std::string& source, const CatalogFormat& format) {
    CsvReader reader(in, source, format.delimiter);
    CsvRecord record;
    if (!reader.next(record)) {
        throw ParseError(source, 0, "empty catalog file");
    }
    expect_header(record, {"item_id", "title", "year", "genres"}, source);

    std::vector<Item> items;
    std::set<ExternalId> seen;
    while (reader.next(record)) {
        if (record.fields.size() != 4) {
            throw ParseError(source, record.line,
                             "expected 4 fields, got " + std::to_string(record.fields.size()));
        }
        Item item;
        item.external_id = parse_int(record.fields[0], source, record.line);
        item.title = record.fields[1];
        if (item.title.empty()) {
            throw ParseError(source, record.line, "missing title");
        }
        if (!record.fields[2].empty()) {
            item.year = static_cast<int>(parse_int(record.fields[2], source, record.line));
        }
        item.genres = split(record.fields[3], format.genre_separator);
        if (!seen.insert(item.external_id).second) {
            throw ParseError(source, record.line,
                             "duplicate item id " + std::to_string(item.external_id));
        }
        items.push_back(std::move(item));
    }
    return ItemCatalog(std::move(items));
}

void write_catalog(std::ostream& out, const ItemCatalog& catalog, const CatalogFormat& format) {
    const char d = format.delimiter;
    out << csv_line({"item_id", "title", "year", "genres"}, d);
    for (const auto& item : catalog.items()) {
        std::string genres;
        for (const auto& g : item.genres) {
            if (!genres.empty()) {
                genres.push_back(format.genre_separator);
            }
            genres += g;
        }
        out << csv_line({std::to_string(item.external_id), csv_field(item.title, d),
                         item.year ? std::to_string(*item.year) : std::string(),
                         csv_field(genres, d)},
                        d);
    }
}

RatingsMatrix::RatingsMatrix(std::size_t num_items, std::vector<ExternalId> user_ids,
                             std::vector<Rating> entries, RatingScale scale)
    : num_items_(num_items), user_ids_(std::move(user_ids)), entries_(std::move(entries)),
      scale_(scale) {
    std::sort(entries_.begin(), entries_.end(), [](const Rating& a, const Rating& b) {
        return a.user != b.user ? a.user < b.user : a.item < b.item;
    });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.user >= user_ids_.size() || e.item >= num_items_) {
            throw InvalidArgument("rating entry out of matrix bounds");
        }
        if (i && entries_[i - 1].user == e.user && entries_[i - 1].item == e.item) {
            throw InvalidArgument("duplicate (user, item) rating");
        }
    }
}

std::vector<std::size_t> RatingsMatrix::item_counts() const {
    std::vector<std::size_t> counts(num_items_, 0);
    for (const auto& e : entries_) {
        ++counts[e.item];
    }
    return counts;
}

RatingsMatrix load_ratings(const std::filesystem::path& path, const ItemCatalog& catalog,
                           std::size_t min_ratings, RatingScale scale) {
    auto in = open_input(path);
    return read_ratings(in, path.string(), catalog, min_ratings, scale);
}

RatingsMatrix read_ratings(std::istream& in, const std::string& source, const ItemCatalog& catalog,
                           std::size_t min_ratings, RatingScale scale) {
    if (!(scale.min <= scale.max)) {
        throw InvalidArgument("rating scale min must not exceed max");
    }
    CsvReader reader(in, source);
    CsvRecord record;
    if (!reader.next(record)) {
        throw ParseError(source, 0, "empty ratings file");
    }
    expect_header(record, {"user_id", "item_id", "rating"}, source);

    struct Raw {
        ExternalId user;
        ItemId item;
        double value;
        std::size_t line;
    };
    std::vector<Raw> raw;
    while (reader.next(record)) {
        if (record.fields.size() != 3) {
            throw ParseError(source, record.line,
                             "expected 3 fields, got " + std::to_string(record.fields.size()));
        }
        const auto user = parse_int(record.fields[0], source, record.line);
        const auto external_item = parse_int(record.fields[1], source, record.line);
        const auto value = parse_double(record.fields[2], source, record.line);
        const auto item = catalog.find(external_item);
        if (!item) {
            throw ParseError(source, record.line, "unknown item id " + std::to_string(external_item));
        }
        if (value < scale.min || value > scale.max) {
            throw ParseError(source, record.line, "rating " + record.fields[2] + " outside scale");
        }
        raw.push_back({user, *item, value, record.line});
    }

    std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
        if (a.user != b.user) return a.user < b.user;
        if (a.item != b.item) return a.item < b.item;
        return a.line < b.line;
    });

    std::vector<ExternalId> user_ids;
    std::vector<Rating> entries;
    for (std::size_t begin = 0; begin < raw.size();) {
        std::size_t end = begin;
        while (end < raw.size() && raw[end].user == raw[begin].user) {
            if (end > begin && raw[end].item == raw[end - 1].item) {
                throw ParseError(source, raw[end].line, "duplicate rating for user " +
                                                            std::to_string(raw[end].user));
            }
            ++end;
        }
        if (end - begin >= min_ratings) {
            const auto user = static_cast<std::uint32_t>(user_ids.size());
            user_ids.push_back(raw[begin].user);
            for (std::size_t i = begin; i < end; ++i) {
                entries.push_back({user, raw[i].item, raw[i].value});
            }
        }
        begin = end;
    }
    return RatingsMatrix(catalog.size(), std::move(user_ids), std::move(entries), scale);
}

void write_ratings(std::ostream& out, const RatingsMatrix& ratings, const ItemCatalog& catalog) {
    out << csv_line({"user_id", "item_id", "rating"});
    for (const auto& e : ratings.entries()) {
        out << csv_line({std::to_string(ratings.user_external_id(e.user)),
                         std::to_string(catalog.external_id(e.item)), format_double(e.value)});
    }
}

TextCorpus::TextCorpus(std::size_t num_items, std::map<ItemId, std::string> docs)
    : num_items_(num_items), docs_(std::move(docs)) {
    for (const auto& [id, text] : docs_) {
        if (id >= num_items_) {
            throw InvalidArgument("document for unknown item " + std::to_string(id));
        }
    }
    for (ItemId id = 0; id < num_items_; ++id) {
        if (!docs_.contains(id)) {
            missing_.push_back(id);
        }
    }
}

TextCorpus load_corpus(const std::filesystem::path& path, const ItemCatalog& catalog) {
    auto in = open_input(path);
    return read_corpus(in, path.string(), catalog);
}

TextCorpus read_corpus(std::istream& in, const std::string& source, const ItemCatalog& catalog) {
    std::map<ItemId, std::string> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError(source, line_no, "expected item_id<TAB>text");
        }
        const std::string_view id_text(line.data(), tab);
        if (line_no == 1 && id_text == "item_id") {
            continue;
        }
        const auto external = parse_int(id_text, source, line_no);
        const auto item = catalog.find(external);
        if (!item) {
            throw ParseError(source, line_no, "unknown item id " + std::to_string(external));
        }
        auto text = unescape_text(std::string_view(line).substr(tab + 1), source, line_no);
        if (!docs.emplace(*item, std::move(text)).second) {
            throw ParseError(source, line_no, "duplicate document for item " + std::to_string(external));
        }
    }
    return TextCorpus(catalog.size(), std::move(docs));
}

void write_corpus(std::ostream& out, const TextCorpus& corpus, const ItemCatalog& catalog) {
    out << "item_id\ttext\n";
    for (const auto& [id, text] : corpus.docs()) {
        out << catalog.external_id(id) << '\t' << escape_text(text) << '\n';
    }
}

} // namespace recnav
