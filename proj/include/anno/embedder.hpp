// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "anno/errors.hpp"
#include "anno/jsonutil.hpp"
#include "anno/repository.hpp"

namespace anno {

/// Content-to-annotation map: opaque page IDs (e.g. "0000") or URL paths
/// (leading "/") mapped to repository filenames. Filenames that the
/// repository manifest does not know are excluded at load time and kept as
/// warnings.
struct PageMap {
    std::map<std::string, std::string> entries;  // key -> filename
    std::vector<std::string> warnings;

    static PageMap load(const std::string& bytes, const Repository& repo) {
        const std::string what = "page map";
        std::set<std::string> seen;
        Json j;
        try {
            j = Json::parse(bytes, [&](int, Json::parse_event_t event, Json& parsed) {
                if (event == Json::parse_event_t::key) {
                    std::string key = parsed.get<std::string>();
                    if (!seen.insert(key).second)
                        throw Error(ErrorKind::DuplicateKey,
                                    what + ": duplicate key \"" + key + "\"");
                }
                return true;
            });
        } catch (const Json::exception& e) {
            throw Error(ErrorKind::Parse, what + ": " + e.what());
        }
        expect_object(j, what);

        std::set<std::string> known;
        for (const auto& [id, e] : repo.entries()) {
            (void)id;
            known.insert(e.filename);
        }

        PageMap pm;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key().empty())
                throw Error(ErrorKind::Parse, what + ": empty key");
            if (!it->is_string() || it->get<std::string>().empty())
                throw Error(ErrorKind::Parse, what + ": value for \"" + it.key() +
                                                  "\" must be a non-empty filename");
            std::string filename = it->get<std::string>();
            if (!known.count(filename)) {
                pm.warnings.push_back("page map entry \"" + it.key() + "\" references \"" +
                                      filename + "\", which is not in the repository");
                continue;
            }
            pm.entries.emplace(it.key(), std::move(filename));
        }
        return pm;
    }

    static PageMap load_file(const std::filesystem::path& path, const Repository& repo) {
        return load(read_file(path), repo);
    }

    /// Exact match first; URL-path keys additionally match after stripping
    /// the query string and one trailing slash from the request.
    std::optional<std::string> lookup(const std::string& request_key) const {
        if (auto it = entries.find(request_key); it != entries.end()) return it->second;
        std::string normalized = request_key.substr(0, request_key.find('?'));
        if (normalized.size() > 1 && normalized.back() == '/') normalized.pop_back();
        if (normalized.rfind('/', 0) == 0)
            if (auto it = entries.find(normalized); it != entries.end()) return it->second;
        return std::nullopt;
    }
};

namespace detail {

inline std::size_t find_ci(std::string_view haystack, std::string_view lowered_needle,
                           std::size_t from = 0) {
    if (lowered_needle.empty() || haystack.size() < lowered_needle.size())
        return std::string_view::npos;
    for (std::size_t i = from; i + lowered_needle.size() <= haystack.size(); ++i) {
        std::size_t k = 0;
        while (k < lowered_needle.size() &&
               std::tolower(static_cast<unsigned char>(haystack[i + k])) == lowered_needle[k])
            ++k;
        if (k == lowered_needle.size()) return i;
    }
    return std::string_view::npos;
}

/// First `<body ...>` open tag, skipping lookalikes such as `<bodyguard>`.
inline std::size_t find_body_open_end(std::string_view html) {
    std::size_t pos = 0;
    while ((pos = find_ci(html, "<body", pos)) != std::string_view::npos) {
        std::size_t after = pos + 5;
        if (after < html.size() &&
            (html[after] == '>' || html[after] == '/' ||
             std::isspace(static_cast<unsigned char>(html[after])))) {
            std::size_t close = html.find('>', after);
            if (close != std::string_view::npos) return close + 1;
        }
        pos += 5;
    }
    return std::string_view::npos;
}

}  // namespace detail

/// Insert the annotation as a JSON-LD script block before the first
/// `</head>`, or after the `<body ...>` open tag when there is no head.
/// Re-injecting with the same annotation id replaces the existing block,
/// so the operation is idempotent; all other bytes pass through untouched.
inline std::string inject(std::string_view html, std::string_view annotation,
                          std::string_view annotation_id) {
    std::string open = "<script type=\"application/ld+json\" data-annotation-id=\"" +
                       std::string(annotation_id) + "\">";
    std::string block = open + std::string(annotation) + "</script>";

    std::string out(html);
    if (std::size_t existing = out.find(open); existing != std::string::npos) {
        std::size_t content = existing + open.size();
        std::size_t end = out.find("</script>", content);
        if (end != std::string::npos) {
            out.replace(content, end - content, annotation);
            return out;
        }
    }

    if (std::size_t head_end = detail::find_ci(out, "</head>"); head_end != std::string::npos) {
        out.insert(head_end, block);
        return out;
    }
    if (std::size_t after_body = detail::find_body_open_end(out);
        after_body != std::string::npos) {
        out.insert(after_body, block);
        return out;
    }
    throw Error(ErrorKind::NotInjectable,
                "cannot inject annotation \"" + std::string(annotation_id) +
                    "\": no </head> or <body> tag found");
}

}  // namespace anno
