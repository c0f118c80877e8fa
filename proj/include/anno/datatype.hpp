// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace anno {

enum class Primitive { Text, Number, Boolean, Date, DateTime, Time, Url };

inline std::optional<Primitive> primitive_from_name(std::string_view name) {
    if (name == "Text") return Primitive::Text;
    if (name == "Number") return Primitive::Number;
    if (name == "Boolean") return Primitive::Boolean;
    if (name == "Date") return Primitive::Date;
    if (name == "DateTime") return Primitive::DateTime;
    if (name == "Time") return Primitive::Time;
    if (name == "URL") return Primitive::Url;
    return std::nullopt;
}

inline std::string_view primitive_name(Primitive p) {
    switch (p) {
        case Primitive::Text: return "Text";
        case Primitive::Number: return "Number";
        case Primitive::Boolean: return "Boolean";
        case Primitive::Date: return "Date";
        case Primitive::DateTime: return "DateTime";
        case Primitive::Time: return "Time";
        case Primitive::Url: return "URL";
    }
    return "Text";
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline bool in_range(std::string_view s, int lo, int hi) {
    if (!all_digits(s)) return false;
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v >= lo && v <= hi;
}

// YYYY-MM-DD
inline bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    return all_digits(s.substr(0, 4)) && in_range(s.substr(5, 2), 1, 12) &&
           in_range(s.substr(8, 2), 1, 31);
}

// HH:MM:SS with optional fraction and optional zone (Z or +/-HH:MM)
inline bool is_iso_time(std::string_view s) {
    if (s.size() < 8 || s[2] != ':' || s[5] != ':') return false;
    if (!in_range(s.substr(0, 2), 0, 23) || !in_range(s.substr(3, 2), 0, 59) ||
        !in_range(s.substr(6, 2), 0, 59))
        return false;
    std::size_t i = 8;
    if (i < s.size() && s[i] == '.') {
        ++i;
        std::size_t digits = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            ++i;
            ++digits;
        }
        if (digits == 0) return false;
    }
    if (i == s.size()) return true;
    if (s[i] == 'Z') return i + 1 == s.size();
    if (s[i] == '+' || s[i] == '-') {
        std::string_view zone = s.substr(i + 1);
        return zone.size() == 5 && zone[2] == ':' && in_range(zone.substr(0, 2), 0, 14) &&
               in_range(zone.substr(3, 2), 0, 59);
    }
    return false;
}

}  // namespace detail

/// The frozen lexical rules for literal values. Locale-independent by
/// construction: Number accepts an optional sign, digits, and at most one
/// "." decimal point; Boolean accepts exactly true/false/1/0; Date,
/// DateTime and Time are ISO 8601; URL requires a scheme.
inline bool lexical_matches(Primitive p, std::string_view s) {
    switch (p) {
        case Primitive::Text:
            return true;
        case Primitive::Number: {
            std::size_t i = 0;
            if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
            std::size_t digits = 0, dots = 0;
            for (; i < s.size(); ++i) {
                if (s[i] >= '0' && s[i] <= '9') ++digits;
                else if (s[i] == '.') ++dots;
                else return false;
            }
            return digits > 0 && dots <= 1;
        }
        case Primitive::Boolean:
            return s == "true" || s == "false" || s == "1" || s == "0";
        case Primitive::Date:
            return detail::is_iso_date(s);
        case Primitive::DateTime:
            return s.size() > 11 && detail::is_iso_date(s.substr(0, 10)) && s[10] == 'T' &&
                   detail::is_iso_time(s.substr(11));
        case Primitive::Time:
            return detail::is_iso_time(s);
        case Primitive::Url: {
            if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
            std::size_t i = 1;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '+' ||
                    s[i] == '-' || s[i] == '.'))
                ++i;
            return i < s.size() && s[i] == ':' && i + 1 < s.size();
        }
    }
    return false;
}

}  // namespace anno
