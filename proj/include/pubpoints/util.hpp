#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pubpoints {

/// Invalid configuration input (registry config, roster file, CLI wiring).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent data at run time (snapshot files, missing areas, ...).
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

/// Trim and collapse internal whitespace runs to single spaces.
/// DBLP author names and roster names share this convention, so exact joins work.
inline std::string normalize_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            if (!out.empty()) pending_space = true;
        } else {
            if (pending_space) {
                out.push_back(' ');
                pending_space = false;
            }
            out.push_back(c);
        }
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace pubpoints
