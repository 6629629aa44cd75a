#include "recnav/csv.hpp"

#include "recnav/error.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <system_error>

namespace recnav {

CsvReader::CsvReader(std::istream& in, std::string source, char delimiter)
    : in_(in), source_(std::move(source)), delimiter_(delimiter) {}

bool CsvReader::next(CsvRecord& record) {
    record.fields.clear();
    for (;;) {
        if (in_.peek() == std::char_traits<char>::eof()) {
            return false;
        }
        record.line = line_;
        std::string field;
        bool quoted = false;
        bool field_started = false;
        bool after_quote = false;
        bool any = false;
        int ch;
        while ((ch = in_.get()) != std::char_traits<char>::eof()) {
            const char c = static_cast<char>(ch);
            if (quoted) {
                if (c == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        quoted = false;
                        after_quote = true;
                    }
                } else {
                    if (c == '\n') {
                        ++line_;
                    }
                    field.push_back(c);
                }
                continue;
            }
            if (c == '\r' && in_.peek() == '\n') {
                continue;
            }
            if (c == '\n') {
                ++line_;
                break;
            }
            any = true;
            if (c == delimiter_) {
                record.fields.push_back(std::move(field));
                field.clear();
                field_started = false;
                after_quote = false;
                continue;
            }
            if (c == '"' && !field_started) {
                quoted = true;
                field_started = true;
                continue;
            }
            if (after_quote) {
                throw ParseError(source_, record.line, "unexpected character after closing quote");
            }
            field_started = true;
            field.push_back(c);
        }
        if (quoted) {
            throw ParseError(source_, record.line, "unterminated quoted field");
        }
        if (!any && record.fields.empty() && field.empty()) {
            if (ch == std::char_traits<char>::eof()) {
                return false;
            }
            continue; // blank line
        }
        record.fields.push_back(std::move(field));
        return true;
    }
}

std::string csv_field(std::string_view value, char delimiter) {
    const bool needs_quotes = value.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                              std::string_view::npos;
    if (!needs_quotes) {
        return std::string(value);
    }
    std::string out;
    out.reserve(value.size() + 2);
    out.push_back('"');
    for (char c : value) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_line(const std::vector<std::string>& fields, char delimiter) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            out.push_back(delimiter);
        }
        out += fields[i];
    }
    out.push_back('\n');
    return out;
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw Error("format_double: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

std::int64_t parse_int(std::string_view text, const std::string& source, std::size_t line) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError(source, line, "expected integer, got '" + std::string(text) + "'");
    }
    return value;
}

double parse_double(std::string_view text, const std::string& source, std::size_t line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError(source, line, "expected number, got '" + std::string(text) + "'");
    }
    return value;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open input file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open output file: " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

} // namespace recnav
