// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <httplib.h>

#include "anno/errors.hpp"
#include "anno/jsonutil.hpp"

namespace anno {

enum class SourceKind { Http, File };
enum class HttpMethod { Get, Post };

/// One configured payload source: either an HTTP endpoint speaking
/// request/response XML, or a local path glob. `${VAR}` references in the
/// URL and in header values are resolved from the environment at fetch
/// time; `{name}` placeholders in the body template are resolved from the
/// caller-supplied bindings.
struct SourceConfig {
    std::string name;
    SourceKind kind = SourceKind::File;
    std::string dataset;
    std::string mapping;  // mapping file path, resolved by the pipeline

    // http
    std::string url;
    HttpMethod method = HttpMethod::Get;
    std::optional<std::string> body_template;
    std::map<std::string, std::string> headers;
    int timeout_seconds = 30;
    int retries = 0;

    // file
    std::string path;  // literal path, or a glob in the final component

    static SourceConfig parse(const Json& j) {
        const std::string what = "source config";
        expect_object(j, what);
        reject_unknown_keys(j,
                            {"name", "kind", "dataset", "mapping", "url", "method", "body",
                             "headers", "timeoutSeconds", "retries", "path"},
                            what);
        SourceConfig cfg;
        cfg.name = expect_string(j, "name", what);
        if (cfg.name.empty()) throw Error(ErrorKind::Config, what + ": \"name\" is empty");
        const std::string scoped = what + " \"" + cfg.name + "\"";
        cfg.dataset = expect_string(j, "dataset", scoped);
        cfg.mapping = expect_string(j, "mapping", scoped);

        std::string kind = expect_string(j, "kind", scoped);
        if (kind == "http") {
            cfg.kind = SourceKind::Http;
        } else if (kind == "file") {
            cfg.kind = SourceKind::File;
        } else {
            throw Error(ErrorKind::Config,
                        scoped + ": unknown kind \"" + kind + "\" (expected http or file)");
        }

        if (cfg.kind == SourceKind::Http) {
            for (const char* key : {"path"})
                if (j.contains(key))
                    throw Error(ErrorKind::Config,
                                scoped + ": \"" + key + "\" is not valid for kind http");
            cfg.url = expect_string(j, "url", scoped);
            if (cfg.url.rfind("https://", 0) == 0)
                throw Error(ErrorKind::Config,
                            scoped + ": https endpoints are not supported in this build");
            if (cfg.url.rfind("http://", 0) != 0)
                throw Error(ErrorKind::Config, scoped + ": url must start with http://");
            if (j.contains("method")) {
                std::string m = expect_string(j, "method", scoped);
                if (m == "GET") {
                    cfg.method = HttpMethod::Get;
                } else if (m == "POST") {
                    cfg.method = HttpMethod::Post;
                } else {
                    throw Error(ErrorKind::Config,
                                scoped + ": unknown method \"" + m + "\" (expected GET or POST)");
                }
            }
            if (j.contains("body")) cfg.body_template = expect_string(j, "body", scoped);
            if (j.contains("headers")) {
                const Json& hs = j.at("headers");
                expect_object(hs, scoped + " headers");
                for (auto it = hs.begin(); it != hs.end(); ++it) {
                    if (!it->is_string())
                        throw Error(ErrorKind::Config,
                                    scoped + ": header \"" + it.key() + "\" must be a string");
                    cfg.headers[it.key()] = it->get<std::string>();
                }
            }
            if (j.contains("timeoutSeconds")) {
                const Json& t = j.at("timeoutSeconds");
                if (!t.is_number_integer())
                    throw Error(ErrorKind::Config, scoped + ": timeoutSeconds must be an integer");
                cfg.timeout_seconds = t.get<int>();
            }
            if (cfg.timeout_seconds <= 0)
                throw Error(ErrorKind::Config, scoped + ": timeoutSeconds must be positive");
            if (j.contains("retries")) {
                const Json& r = j.at("retries");
                if (!r.is_number_integer() || r.get<int>() < 0)
                    throw Error(ErrorKind::Config,
                                scoped + ": retries must be a non-negative integer");
                cfg.retries = r.get<int>();
            }
        } else {
            for (const char* key : {"url", "method", "body", "headers", "timeoutSeconds",
                                    "retries"})
                if (j.contains(key))
                    throw Error(ErrorKind::Config,
                                scoped + ": \"" + key + "\" is not valid for kind file");
            cfg.path = expect_string(j, "path", scoped);
            if (cfg.path.empty()) throw Error(ErrorKind::Config, scoped + ": \"path\" is empty");
        }
        return cfg;
    }
};

/// Outcome of one fetch: payloads and failures, each tagged with the file
/// path or the source name so errors stay attributable. Every planned
/// request or glob match lands in exactly one of the two lists.
struct FetchResult {
    std::vector<std::pair<std::string, std::string>> payloads;  // tag -> bytes
    std::vector<std::pair<std::string, std::string>> failures;  // tag -> message

    bool ok() const { return failures.empty(); }
};

namespace detail {

inline std::string interpolate_env(const std::string& text, const std::string& where) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t dollar = text.find("${", pos);
        if (dollar == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        out.append(text, pos, dollar - pos);
        std::size_t close = text.find('}', dollar + 2);
        if (close == std::string::npos)
            throw Error(ErrorKind::Config, where + ": unterminated ${...} reference");
        std::string var = text.substr(dollar + 2, close - dollar - 2);
        const char* value = var.empty() ? nullptr : std::getenv(var.c_str());
        if (!value)
            throw Error(ErrorKind::Config,
                        where + ": environment variable \"" + var + "\" is not set");
        out += value;
        pos = close + 1;
    }
    return out;
}

inline std::string fill_placeholders(const std::string& tpl,
                                     const std::map<std::string, std::string>& bindings,
                                     const std::string& where) {
    std::string out;
    std::size_t pos = 0;
    while (pos < tpl.size()) {
        std::size_t open = tpl.find('{', pos);
        if (open == std::string::npos) {
            out.append(tpl, pos, std::string::npos);
            break;
        }
        out.append(tpl, pos, open - pos);
        std::size_t close = tpl.find('}', open + 1);
        if (close == std::string::npos)
            throw Error(ErrorKind::Config, where + ": unterminated {placeholder} in body");
        std::string key = tpl.substr(open + 1, close - open - 1);
        auto it = bindings.find(key);
        if (it == bindings.end())
            throw Error(ErrorKind::Config,
                        where + ": no binding for body placeholder \"" + key + "\"");
        out += it->second;
        pos = close + 1;
    }
    return out;
}

/// Splits "http://host:port/some/path" into the client base and the
/// request path (defaulting to "/").
inline std::pair<std::string, std::string> split_url(const std::string& url) {
    std::size_t scheme = url.find("://");
    std::size_t slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

inline bool has_wildcard(std::string_view s) {
    return s.find('*') != std::string_view::npos || s.find('?') != std::string_view::npos;
}

/// Filename match with `*` (any run) and `?` (single character).
inline bool glob_match(std::string_view pattern, std::string_view name) {
    std::size_t p = 0, n = 0, star = std::string_view::npos, mark = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

inline FetchResult fetch_files(const SourceConfig& cfg) {
    FetchResult result;
    std::filesystem::path pattern(cfg.path);
    if (has_wildcard(pattern.parent_path().string()))
        throw Error(ErrorKind::Config, "source \"" + cfg.name +
                                           "\": wildcards are only supported in the final "
                                           "path component");

    std::vector<std::filesystem::path> matches;
    if (has_wildcard(pattern.filename().string())) {
        std::filesystem::path dir =
            pattern.parent_path().empty() ? "." : pattern.parent_path();
        std::error_code ec;
        for (const auto& ent : std::filesystem::directory_iterator(dir, ec))
            if (ent.is_regular_file() &&
                glob_match(pattern.filename().string(), ent.path().filename().string()))
                matches.push_back(ent.path());
        std::sort(matches.begin(), matches.end());
        if (matches.empty()) {
            result.failures.emplace_back(cfg.path, "no files match \"" + cfg.path + "\"");
            return result;
        }
    } else {
        matches.push_back(pattern);
    }

    for (const auto& p : matches) {
        try {
            result.payloads.emplace_back(p.string(), read_file(p));
        } catch (const Error& e) {
            result.failures.emplace_back(p.string(), e.what());
        }
    }
    return result;
}

inline FetchResult fetch_http(const SourceConfig& cfg,
                              const std::map<std::string, std::string>& bindings) {
    const std::string where = "source \"" + cfg.name + "\"";
    FetchResult result;

    std::string url = interpolate_env(cfg.url, where);
    auto [base, path] = split_url(url);
    httplib::Headers headers;
    std::string content_type = "application/xml";
    for (const auto& [key, value] : cfg.headers) {
        std::string resolved = interpolate_env(value, where);
        if (key == "Content-Type") {
            content_type = resolved;
        } else {
            headers.emplace(key, resolved);
        }
    }
    std::string body;
    if (cfg.body_template) body = fill_placeholders(*cfg.body_template, bindings, where);

    httplib::Client client(base);
    client.set_connection_timeout(cfg.timeout_seconds);
    client.set_read_timeout(cfg.timeout_seconds);

    std::string last_error;
    for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
        httplib::Result res = cfg.method == HttpMethod::Get
                                  ? client.Get(path, headers)
                                  : client.Post(path, headers, body, content_type);
        if (res && res->status >= 200 && res->status < 300) {
            result.payloads.emplace_back(cfg.name, res->body);
            return result;
        }
        last_error = res ? "HTTP status " + std::to_string(res->status)
                         : "network error: " + httplib::to_string(res.error());
    }
    result.failures.emplace_back(
        cfg.name, last_error + " after " + std::to_string(cfg.retries + 1) + " attempt(s)");
    return result;
}

}  // namespace detail

/// Fetch all payloads for one source. File sources read every glob match
/// in lexicographic path order; HTTP sources issue one request with
/// bounded retries on network errors and non-2xx statuses.
inline FetchResult fetch(const SourceConfig& cfg,
                         const std::map<std::string, std::string>& bindings = {}) {
    return cfg.kind == SourceKind::File ? detail::fetch_files(cfg)
                                        : detail::fetch_http(cfg, bindings);
}

}  // namespace anno
