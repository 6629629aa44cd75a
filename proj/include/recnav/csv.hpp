#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace recnav {

struct CsvRecord {
    std::size_t line = 0; // 1-based line where the record starts
    std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may contain delimiters, doubled quotes and
/// line breaks. CRLF and LF line endings are both accepted.
class CsvReader {
public:
    CsvReader(std::istream& in, std::string source, char delimiter = ',');

    /// Reads the next record; returns false at end of input. Blank lines are skipped.
    bool next(CsvRecord& record);

    const std::string& source() const noexcept { return source_; }

private:
    std::istream& in_;
    std::string source_;
    char delimiter_;
    std::size_t line_ = 1;
};

/// Quotes a field when it contains the delimiter, a quote or a line break.
std::string csv_field(std::string_view value, char delimiter = ',');

/// Joins already-formatted values into one CSV line (with trailing '\n').
std::string csv_line(const std::vector<std::string>& fields, char delimiter = ',');

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Strict whole-field numeric parsing; throws ParseError naming source/line.
std::int64_t parse_int(std::string_view text, const std::string& source, std::size_t line);
double parse_double(std::string_view text, const std::string& source, std::size_t line);

std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace recnav
