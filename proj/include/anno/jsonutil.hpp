// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <filesystem>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "anno/errors.hpp"

namespace anno {

using Json = nlohmann::json;

inline Json parse_json(std::string_view bytes, const std::string& what) {
    try {
        return Json::parse(bytes);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::Parse, what + ": " + e.what());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::Io, "cannot read " + path.string());
    return out.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

/// Write to a sibling temp file, then rename over the target. Rename within
/// one directory is atomic on POSIX; readers see either the old or new file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    write_file(tmp, bytes);
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot rename " + tmp.string() + " to " + path.string());
    }
}

inline const Json& expect_object(const Json& j, const std::string& what) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, what + ": expected a JSON object");
    return j;
}

inline const Json& expect_member(const Json& j, const char* key, const std::string& what) {
    auto it = j.find(key);
    if (it == j.end())
        throw Error(ErrorKind::Parse, what + ": missing key \"" + key + "\"");
    return *it;
}

inline std::string expect_string(const Json& j, const char* key, const std::string& what) {
    const Json& v = expect_member(j, key, what);
    if (!v.is_string())
        throw Error(ErrorKind::Parse, what + ": key \"" + key + "\" must be a string");
    return v.get<std::string>();
}

inline const Json& expect_array(const Json& j, const char* key, const std::string& what) {
    const Json& v = expect_member(j, key, what);
    if (!v.is_array())
        throw Error(ErrorKind::Parse, what + ": key \"" + key + "\" must be an array");
    return v;
}

inline void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                                const std::string& what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (auto a : allowed)
            if (a == it.key()) { known = true; break; }
        if (!known)
            throw Error(ErrorKind::Parse, what + ": unknown key \"" + it.key() + "\"");
    }
}

}  // namespace anno
