#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pubpoints/util.hpp"

namespace pubpoints::csv {

/// Reads one CSV row. Supports RFC 4180 quoting: fields may be wrapped in
/// double quotes and then contain commas, newlines and doubled quotes.
/// Returns false at end of input. `line` is advanced past every physical
/// line consumed, so callers can report positions.
inline bool read_row(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
    fields.clear();
    int first = in.peek();
    if (first == std::char_traits<char>::eof()) return false;

    std::string field;
    bool quoted = false;
    bool saw_any = false;
    ++line;
    for (int ci = in.get(); ; ci = in.get()) {
        if (ci == std::char_traits<char>::eof()) {
            if (quoted) throw config_error("csv: unterminated quoted field at line " + std::to_string(line));
            if (saw_any || !field.empty() || !fields.empty()) fields.push_back(std::move(field));
            return !fields.empty();
        }
        char c = static_cast<char>(ci);
        saw_any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                break;
            case '\r':
                break;
            case '\n':
                fields.push_back(std::move(field));
                return true;
            default:
                field.push_back(c);
        }
    }
}

inline std::string escape_field(std::string_view f) {
    bool needs_quotes = f.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes) return std::string(f);
    std::string out;
    out.reserve(f.size() + 2);
    out.push_back('"');
    for (char c : f) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << escape_field(fields[i]);
    }
    out.put('\n');
}

}  // namespace pubpoints::csv
