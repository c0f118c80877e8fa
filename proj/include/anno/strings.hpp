// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <string>
#include <string_view>

namespace anno {

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

inline char to_lower_ascii(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

/// Case-insensitive (ASCII) search. Returns npos when absent.
inline std::size_t ifind(std::string_view haystack, std::string_view needle,
                         std::size_t from = 0) {
    if (needle.empty() || haystack.size() < needle.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
        std::size_t j = 0;
        while (j < needle.size() &&
               to_lower_ascii(haystack[i + j]) == to_lower_ascii(needle[j]))
            ++j;
        if (j == needle.size()) return i;
    }
    return std::string_view::npos;
}

/// BCP-47 syntax as used here: primary subtag of 2-8 letters, then optional
/// alphanumeric subtags of 1-8 characters separated by '-'.
inline bool is_language_tag(std::string_view tag) {
    std::size_t i = 0;
    std::size_t primary = 0;
    while (i < tag.size() && std::isalpha(static_cast<unsigned char>(tag[i]))) {
        ++i;
        ++primary;
    }
    if (primary < 2 || primary > 8) return false;
    while (i < tag.size()) {
        if (tag[i] != '-') return false;
        ++i;
        std::size_t sub = 0;
        while (i < tag.size() && std::isalnum(static_cast<unsigned char>(tag[i]))) {
            ++i;
            ++sub;
        }
        if (sub < 1 || sub > 8) return false;
    }
    return true;
}

}  // namespace anno
