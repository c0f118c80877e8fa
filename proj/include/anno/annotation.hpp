// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "anno/errors.hpp"
#include "anno/jsonutil.hpp"
#include "anno/strings.hpp"

namespace anno {

inline constexpr std::string_view kSchemaOrgContext = "http://schema.org";

namespace detail {

/// Value-semantic heap box, used to close the Value/AnnotationDocument
/// recursion.
template <class T>
class Box {
public:
    explicit Box(T v) : p_(std::make_unique<T>(std::move(v))) {}
    Box(const Box& o) : p_(std::make_unique<T>(*o.p_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& o) {
        p_ = std::make_unique<T>(*o.p_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    T& operator*() { return *p_; }
    const T& operator*() const { return *p_; }

private:
    std::unique_ptr<T> p_;
};

}  // namespace detail

class AnnotationDocument;

/// A plain literal: text, number (integer or decimal), or boolean. The JSON
/// number kind is preserved, so 5 and 5.0 stay distinct across round trips.
struct Literal {
    std::variant<std::string, std::int64_t, double, bool> value;

    Literal() = default;
    explicit Literal(std::string s) : value(std::move(s)) {}
    explicit Literal(const char* s) : value(std::string(s)) {}
    explicit Literal(std::int64_t n) : value(n) {}
    explicit Literal(int n) : value(static_cast<std::int64_t>(n)) {}
    explicit Literal(double d) : value(d) {}
    explicit Literal(bool b) : value(b) {}

    bool operator==(const Literal&) const = default;
};

/// A language-tagged text value, serialized as {"@language": .., "@value": ..}.
struct LangLiteral {
    std::string value;
    std::string language;  // BCP-47 syntax, two-letter minimum

    bool operator==(const LangLiteral&) const = default;
};

/// A nested entity (an annotation document without "@context").
class Entity {
public:
    explicit Entity(AnnotationDocument doc);
    const AnnotationDocument& doc() const { return *doc_; }
    AnnotationDocument& doc() { return *doc_; }
    bool operator==(const Entity& o) const;

private:
    detail::Box<AnnotationDocument> doc_;
};

using Value = std::variant<Literal, LangLiteral, Entity>;

/// A typed entity tree, the unit of repository storage. Properties are kept
/// sorted by name, matching canonical serialization order; value lists keep
/// their order. Immutable use is thread-safe.
class AnnotationDocument {
public:
    std::optional<std::string> id;          // @id
    std::vector<std::string> types;         // @type, non-empty
    std::map<std::string, std::vector<Value>> properties;

    void add(std::string property, Value v) {
        properties[std::move(property)].push_back(std::move(v));
    }

    bool operator==(const AnnotationDocument&) const = default;
};

inline Entity::Entity(AnnotationDocument doc) : doc_(std::move(doc)) {}
inline bool Entity::operator==(const Entity& o) const { return *doc_ == *o.doc_; }

namespace detail {

inline Json doc_to_json(const AnnotationDocument& a, bool top);

inline Json value_to_json(const Value& v) {
    return std::visit(
        [](const auto& x) -> Json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Literal>) {
                return std::visit([](const auto& lit) -> Json { return Json(lit); }, x.value);
            } else if constexpr (std::is_same_v<T, LangLiteral>) {
                return Json{{"@language", x.language}, {"@value", x.value}};
            } else {
                return doc_to_json(x.doc(), false);
            }
        },
        v);
}

inline Json doc_to_json(const AnnotationDocument& a, bool top) {
    // nlohmann's default object keeps keys in lexicographic byte order,
    // which is exactly the canonical order: "@context" < "@id" < "@type"
    // precede every property name.
    Json j = Json::object();
    if (top) j["@context"] = std::string(kSchemaOrgContext);
    if (a.id) j["@id"] = *a.id;
    if (a.types.size() == 1) {
        j["@type"] = a.types.front();
    } else {
        j["@type"] = a.types;
    }
    for (const auto& [prop, values] : a.properties) {
        if (values.size() == 1) {
            j[prop] = value_to_json(values.front());
        } else {
            Json arr = Json::array();
            for (const auto& v : values) arr.push_back(value_to_json(v));
            j[prop] = std::move(arr);
        }
    }
    return j;
}

}  // namespace detail

/// Canonical JSON-LD bytes: fixed "@context", "@id", "@type" first, then
/// properties in lexicographic byte order; single-element type lists and
/// single-value properties serialize bare; no insignificant whitespace;
/// numbers in shortest round-trip decimal form. Serialization is
/// deterministic: equal documents produce identical bytes.
inline std::string canonical_serialize(const AnnotationDocument& a) {
    return detail::doc_to_json(a, true).dump();
}

namespace detail {

/// "http://schema.org", with or without trailing slash, http or https.
inline bool acceptable_context(std::string_view ctx) {
    if (ctx.size() > 1 && ctx.back() == '/') ctx.remove_suffix(1);
    return ctx == "http://schema.org" || ctx == "https://schema.org";
}

inline AnnotationDocument doc_from_json(const Json& j, bool top, const std::string& where);

inline Value value_from_json(const Json& e, const std::string& where) {
    if (e.is_string()) return Literal(e.get<std::string>());
    if (e.is_boolean()) return Literal(e.get<bool>());
    if (e.is_number_float()) return Literal(e.get<double>());
    if (e.is_number_unsigned()) {
        auto u = e.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            throw Error(ErrorKind::Parse, where + ": integer out of range");
        return Literal(static_cast<std::int64_t>(u));
    }
    if (e.is_number_integer()) return Literal(e.get<std::int64_t>());
    if (!e.is_object())
        throw Error(ErrorKind::Parse, where + ": unsupported value type");
    if (e.contains("@value")) {
        for (auto it = e.begin(); it != e.end(); ++it)
            if (it.key() != "@value" && it.key() != "@language")
                throw Error(ErrorKind::Parse,
                            where + ": unexpected key \"" + it.key() + "\" in value object");
        const Json& val = e["@value"];
        if (e.contains("@language")) {
            if (!val.is_string() || !e["@language"].is_string())
                throw Error(ErrorKind::Parse,
                            where + ": @value and @language must be strings");
            LangLiteral lit{val.get<std::string>(), e["@language"].get<std::string>()};
            if (!is_language_tag(lit.language))
                throw Error(ErrorKind::Parse,
                            where + ": malformed language tag \"" + lit.language + "\"");
            return lit;
        }
        return value_from_json(val, where);
    }
    return Entity(doc_from_json(e, false, where));
}

inline AnnotationDocument doc_from_json(const Json& j, bool top, const std::string& where) {
    AnnotationDocument doc;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "@context") {
            if (!top)
                throw Error(ErrorKind::Parse,
                            where + ": @context is only allowed at the top level");
            continue;  // validated by the caller
        }
        if (key == "@id") {
            if (!it->is_string())
                throw Error(ErrorKind::Parse, where + ": @id must be a string");
            doc.id = it->get<std::string>();
            continue;
        }
        if (key == "@type") {
            if (it->is_string()) {
                doc.types.push_back(it->get<std::string>());
            } else if (it->is_array()) {
                for (const Json& t : *it) {
                    if (!t.is_string())
                        throw Error(ErrorKind::Parse, where + ": @type entries must be strings");
                    doc.types.push_back(t.get<std::string>());
                }
            } else {
                throw Error(ErrorKind::Parse, where + ": @type must be a string or array");
            }
            continue;
        }
        if (!key.empty() && key.front() == '@')
            throw Error(ErrorKind::Parse,
                        where + ": unsupported JSON-LD keyword \"" + key + "\"");
        std::string vwhere = where + "/" + key;
        std::vector<Value> values;
        if (it->is_array()) {
            for (const Json& e : *it) {
                if (e.is_array())
                    throw Error(ErrorKind::Parse, vwhere + ": nested arrays are not allowed");
                values.push_back(value_from_json(e, vwhere));
            }
            if (values.empty())
                throw Error(ErrorKind::Parse, vwhere + ": empty value list");
        } else {
            values.push_back(value_from_json(*it, vwhere));
        }
        doc.properties.emplace(key, std::move(values));
    }
    if (doc.types.empty())
        throw Error(ErrorKind::Parse, where + ": missing \"@type\"");
    return doc;
}

}  // namespace detail

/// Parse an annotation document. Lenient to key order and whitespace; the
/// top level must carry an acceptable "@context" and at least one "@type".
inline AnnotationDocument parse_annotation(std::string_view bytes) {
    Json j = parse_json(bytes, "annotation");
    if (!j.is_object()) throw Error(ErrorKind::Parse, "annotation: expected a JSON object");
    auto ctx = j.find("@context");
    if (ctx == j.end())
        throw Error(ErrorKind::Parse, "annotation: missing \"@context\"");
    if (!ctx->is_string() || !detail::acceptable_context(ctx->get<std::string>()))
        throw Error(ErrorKind::Parse,
                    "annotation: @context must be \"" + std::string(kSchemaOrgContext) + "\"");
    return detail::doc_from_json(j, true, "annotation");
}

/// Triple count of a document: one per declared type, one per property
/// value, plus the triples of nested entities. "@id" and "@context"
/// contribute nothing.
inline std::int64_t count_triples(const AnnotationDocument& a) {
    std::int64_t n = static_cast<std::int64_t>(a.types.size());
    for (const auto& [prop, values] : a.properties) {
        (void)prop;
        for (const auto& v : values) {
            n += 1;
            if (const Entity* e = std::get_if<Entity>(&v)) n += count_triples(e->doc());
        }
    }
    return n;
}

/// Repository file name stem for a document id: characters outside
/// [A-Za-z0-9._-] become "_".
inline std::string sanitize_id(std::string_view id) {
    std::string out;
    out.reserve(id.size());
    for (char c : id) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                  c == '.' || c == '_' || c == '-';
        out += ok ? c : '_';
    }
    return out;
}

inline std::string annotation_filename(std::string_view id) {
    return sanitize_id(id) + ".json";
}

}  // namespace anno
