// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "anno/annotation.hpp"
#include "anno/datatype.hpp"
#include "anno/domainspec.hpp"
#include "anno/errors.hpp"
#include "anno/hash.hpp"
#include "anno/jsonutil.hpp"
#include "anno/strings.hpp"
#include "anno/vocabulary.hpp"
#include "anno/xml.hpp"
#include "anno/xmlpath.hpp"

namespace anno {

class EntityMap;

/// One rule inside an EntityMap. The source is exactly one of: a path into
/// the XML, a constant, or a nested EntityMap producing entity values.
/// Literal sources carry a datatype and optionally a language, either fixed
/// or read from an attribute of the selected element.
struct PropertyMap {
    std::string property;
    std::optional<PathExpr> path;
    std::optional<std::string> constant;
    std::shared_ptr<const EntityMap> nested;
    Primitive datatype = Primitive::Text;
    std::optional<std::string> lang;       // fixed language tag
    std::optional<std::string> lang_attr;  // attribute carrying the tag

    bool is_literal() const { return !nested; }
};

/// Iterates over XML elements and builds one annotation entity per match.
/// Top-level maps have an absolute iterator and may carry an idPath; nested
/// maps iterate relative to the parent match, have static types only, and
/// produce anonymous entities.
class EntityMap {
public:
    std::string id;  // label used in messages; derived for nested maps
    PathExpr iterator;
    std::vector<std::string> static_types;
    std::optional<PathExpr> type_path;  // dynamic: value looked up in typeTranslations
    std::optional<PathExpr> id_path;
    std::vector<PropertyMap> properties;

    // Allowed property names per resolvable target-type list, precomputed
    // during parse so execution needs no spec access. Keyed by the joined
    // type list.
    std::map<std::string, std::set<std::string>> allowed_by_key;

    bool is_dynamic() const { return type_path.has_value(); }

    static std::string type_list_key(const std::vector<std::string>& types) {
        std::string key;
        for (const auto& t : types) {
            key += t;
            key += '\x1f';
        }
        return key;
    }
};

/// Coverage statistics of a mapping run, aggregating the distinct source
/// type tokens seen and mapped, the distinct target types emitted, and the
/// entity counts. merge() is associative and commutative, so per-document
/// runs can be combined in any order.
struct MappingStats {
    std::set<std::string> source_types_seen;
    std::set<std::string> source_types_mapped;
    std::set<std::string> target_types_used;
    std::int64_t entities_emitted = 0;
    std::int64_t entities_skipped = 0;

    void merge(const MappingStats& o) {
        source_types_seen.insert(o.source_types_seen.begin(), o.source_types_seen.end());
        source_types_mapped.insert(o.source_types_mapped.begin(), o.source_types_mapped.end());
        target_types_used.insert(o.target_types_used.begin(), o.target_types_used.end());
        entities_emitted += o.entities_emitted;
        entities_skipped += o.entities_skipped;
    }

    bool operator==(const MappingStats&) const = default;
};

struct ExecutionResult {
    std::vector<AnnotationDocument> documents;
    MappingStats stats;
};

/// A declarative mapping from an XML shape onto domain-specification types.
/// All rules are validated against the domain specification and vocabulary at
/// parse time; execution is then pure and needs neither.
class MappingDocument {
public:
    /// Mapping file format:
    ///   {"name": s, "dataset": s,
    ///    "typeTranslations": {token: [typeName]},
    ///    "entities": [{"id": s, "iterator": path,
    ///                  "types": [s] | {"fromPath": path}, "idPath": path,
    ///                  "properties": [{"property": s,
    ///                                  "path"|"constant"|"nested": ...,
    ///                                  "datatype": s, "lang"|"langFromAttr": s}]}]}
    static MappingDocument parse(std::string_view bytes, const DomainSpecification& spec,
                                 const Vocabulary& v) {
        const std::string what = "mapping";
        Json j = parse_json(bytes, what);
        expect_object(j, what);
        reject_unknown_keys(j, {"name", "dataset", "typeTranslations", "entities"}, what);

        MappingDocument m;
        m.name_ = expect_string(j, "name", what);
        m.dataset_ = expect_string(j, "dataset", what);
        if (j.contains("typeTranslations")) {
            const Json& tt = j["typeTranslations"];
            expect_object(tt, what + " \"typeTranslations\"");
            for (auto it = tt.begin(); it != tt.end(); ++it) {
                if (!it->is_array())
                    throw Error(ErrorKind::Parse, what + ": translation for \"" + it.key() +
                                                      "\" must be an array");
                std::vector<std::string> targets;
                for (const Json& t : *it) {
                    std::string tn = t.get<std::string>();
                    if (!spec.has_type(tn))
                        throw Error(ErrorKind::UnknownType,
                                    what + ": translation target \"" + tn +
                                        "\" has no TypeSpec in \"" + spec.name() + "\"");
                    targets.push_back(std::move(tn));
                }
                m.translations_.emplace(it.key(), std::move(targets));
            }
        }
        std::set<std::string> ids;
        for (const Json& e : expect_array(j, "entities", what)) {
            EntityMap em = parse_entity_map(e, what, spec, v, /*top=*/true, &m.translations_);
            if (!ids.insert(em.id).second)
                throw Error(ErrorKind::Parse, what + ": duplicate entity map id \"" + em.id + "\"");
            m.entity_maps_.push_back(std::move(em));
        }
        return m;
    }

    static MappingDocument parse_file(const std::filesystem::path& path,
                                      const DomainSpecification& spec, const Vocabulary& v) {
        return parse(read_file(path), spec, v);
    }

    const std::string& name() const { return name_; }
    const std::string& dataset() const { return dataset_; }
    const std::vector<EntityMap>& entity_maps() const { return entity_maps_; }
    const std::map<std::string, std::vector<std::string>>& type_translations() const {
        return translations_;
    }

    /// Run the mapping over one parsed document. Deterministic: identical
    /// inputs yield identical documents and stats.
    ExecutionResult execute(const XmlNode& root) const {
        ExecutionResult res;
        std::map<std::string, std::string> ids_seen;  // document id -> entity map id
        for (const auto& em : entity_maps_) {
            for (const PathValue& match : eval_path_from_document(em.iterator, root)) {
                build_top_entity(em, *match.node, res, ids_seen);
            }
        }
        return res;
    }

    /// Coverage statistics over a list of documents (Table-2 shape).
    MappingStats stats(const std::vector<XmlNode>& docs) const {
        MappingStats total;
        for (const XmlNode& d : docs) total.merge(execute(d).stats);
        return total;
    }

private:
    std::string name_;
    std::string dataset_;
    std::map<std::string, std::vector<std::string>> translations_;
    std::vector<EntityMap> entity_maps_;

    static std::string value_text(const PathValue& pv) {
        return pv.is_node() ? pv.node->direct_text() : pv.text;
    }

    // ---- parse-time validation ----------------------------------------

    static EntityMap parse_entity_map(
        const Json& j, const std::string& what, const DomainSpecification& spec,
        const Vocabulary& v, bool top,
        const std::map<std::string, std::vector<std::string>>* translations,
        const std::string& derived_id = {}) {
        expect_object(j, what + " entity map");
        if (top) {
            reject_unknown_keys(j, {"id", "iterator", "types", "idPath", "properties"},
                                what + " entity map");
        } else {
            reject_unknown_keys(j, {"iterator", "types", "properties"},
                                what + " nested entity map");
        }
        EntityMap em;
        em.id = top ? expect_string(j, "id", what + " entity map") : derived_id;
        if (em.id.empty()) throw Error(ErrorKind::Parse, what + ": entity map id must be non-empty");
        const std::string ctx = what + " entity map \"" + em.id + "\"";

        em.iterator = parse_path(expect_string(j, "iterator", ctx));
        if (top && !em.iterator.absolute)
            throw Error(ErrorKind::Parse, ctx + ": iterator must be absolute (leading \"/\")");
        if (!top && em.iterator.absolute)
            throw Error(ErrorKind::Parse, ctx + ": nested iterator must be relative");
        for (const auto& s : em.iterator.steps)
            if (s.kind != PathStep::Kind::Child)
                throw Error(ErrorKind::Parse, ctx + ": iterator steps must select elements");

        const Json& types = expect_member(j, "types", ctx);
        if (types.is_array()) {
            for (const Json& t : types) {
                std::string tn = t.get<std::string>();
                if (!spec.has_type(tn))
                    throw Error(ErrorKind::UnknownType, ctx + ": target type \"" + tn +
                                                            "\" has no TypeSpec in \"" +
                                                            spec.name() + "\"");
                em.static_types.push_back(std::move(tn));
            }
            if (em.static_types.empty())
                throw Error(ErrorKind::Parse, ctx + ": \"types\" must list at least one type");
        } else if (types.is_object()) {
            if (!top)
                throw Error(ErrorKind::Parse,
                            ctx + ": nested entity maps must declare static types");
            reject_unknown_keys(types, {"fromPath"}, ctx + " \"types\"");
            em.type_path = parse_path(expect_string(types, "fromPath", ctx + " \"types\""));
            if (!translations || translations->empty())
                throw Error(ErrorKind::Parse,
                            ctx + ": dynamic types need a non-empty typeTranslations table");
        } else {
            throw Error(ErrorKind::Parse, ctx + ": \"types\" must be an array or {\"fromPath\": ...}");
        }

        if (j.contains("idPath")) {
            if (!top)
                throw Error(ErrorKind::Parse, ctx + ": nested entity maps may not declare idPath");
            em.id_path = parse_path(expect_string(j, "idPath", ctx));
        }

        // The candidate target-type lists this map can resolve to.
        std::vector<std::vector<std::string>> candidates;
        if (em.is_dynamic()) {
            for (const auto& [token, targets] : *translations)
                if (!targets.empty()) candidates.push_back(targets);
            if (candidates.empty())
                throw Error(ErrorKind::Parse,
                            ctx + ": every typeTranslations entry is empty; nothing can be mapped");
        } else {
            candidates.push_back(em.static_types);
        }
        std::vector<std::map<std::string, PropertySpec>> allowed;
        for (const auto& c : candidates) {
            allowed.push_back(spec.allowed_properties(c));
            em.allowed_by_key.emplace(EntityMap::type_list_key(c), std::set<std::string>{});
        }
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            auto& names = em.allowed_by_key[EntityMap::type_list_key(candidates[i])];
            for (const auto& [pname, ps] : allowed[i]) {
                (void)ps;
                names.insert(pname);
            }
        }

        std::set<std::string> prop_names;
        for (const Json& p : expect_array(j, "properties", ctx)) {
            PropertyMap pm = parse_property_map(p, ctx, spec, v, em, candidates, allowed,
                                                translations);
            if (!prop_names.insert(pm.property).second)
                throw Error(ErrorKind::Parse,
                            ctx + ": duplicate property map for \"" + pm.property + "\"");
            em.properties.push_back(std::move(pm));
        }
        return em;
    }

    static PropertyMap parse_property_map(
        const Json& j, const std::string& ctx, const DomainSpecification& spec,
        const Vocabulary& v, const EntityMap& em,
        const std::vector<std::vector<std::string>>& candidates,
        const std::vector<std::map<std::string, PropertySpec>>& allowed,
        const std::map<std::string, std::vector<std::string>>* translations) {
        expect_object(j, ctx + " property map");
        reject_unknown_keys(
            j, {"property", "path", "constant", "nested", "datatype", "lang", "langFromAttr"},
            ctx + " property map");
        PropertyMap pm;
        pm.property = expect_string(j, "property", ctx + " property map");
        const std::string pctx = ctx + ", property \"" + pm.property + "\"";

        int sources = 0;
        if (j.contains("path")) {
            pm.path = parse_path(expect_string(j, "path", pctx));
            ++sources;
        }
        if (j.contains("constant")) {
            pm.constant = expect_string(j, "constant", pctx);
            ++sources;
        }
        bool has_nested = j.contains("nested");
        if (has_nested) ++sources;
        if (sources != 1)
            throw Error(ErrorKind::Parse,
                        pctx + ": exactly one of \"path\", \"constant\", \"nested\" is required");

        if (j.contains("datatype")) {
            if (has_nested)
                throw Error(ErrorKind::Parse, pctx + ": \"datatype\" applies to literal sources only");
            std::string dt = expect_string(j, "datatype", pctx);
            auto prim = primitive_from_name(dt);
            if (!prim)
                throw Error(ErrorKind::Parse, pctx + ": unknown datatype \"" + dt + "\"");
            pm.datatype = *prim;
        }
        if (j.contains("lang")) {
            pm.lang = expect_string(j, "lang", pctx);
            if (!is_language_tag(*pm.lang))
                throw Error(ErrorKind::Parse,
                            pctx + ": malformed language tag \"" + *pm.lang + "\"");
        }
        if (j.contains("langFromAttr")) {
            if (pm.lang)
                throw Error(ErrorKind::Parse, pctx + ": \"lang\" and \"langFromAttr\" conflict");
            pm.lang_attr = expect_string(j, "langFromAttr", pctx);
            if (!pm.path || pm.path->steps.back().kind != PathStep::Kind::Child)
                throw Error(ErrorKind::Parse,
                            pctx + ": \"langFromAttr\" needs a path ending in an element step");
        }
        if ((pm.lang || pm.lang_attr) && has_nested)
            throw Error(ErrorKind::Parse, pctx + ": languages apply to literal sources only");
        if ((pm.lang || pm.lang_attr) && pm.datatype != Primitive::Text)
            throw Error(ErrorKind::RangeMismatch,
                        pctx + ": language-tagged values must have datatype Text");

        // The property must be allowed for at least one candidate type list;
        // where it is allowed, the datatype or nested types must fit the
        // specified ranges.
        bool anywhere = false;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            auto it = allowed[i].find(pm.property);
            if (it == allowed[i].end()) continue;
            anywhere = true;
            const PropertySpec& ps = it->second;
            if (!has_nested) {
                check_literal_ranges(pm, ps, pctx, candidates[i]);
            } else {
                check_nested_ranges(j["nested"], pm, ps, pctx, spec, v, candidates[i]);
            }
        }
        if (!anywhere) {
            std::string lists;
            for (const auto& c : candidates) {
                lists += lists.empty() ? "[" : ", [";
                for (std::size_t k = 0; k < c.size(); ++k)
                    lists += (k ? " " : "") + c[k];
                lists += "]";
            }
            throw Error(ErrorKind::UnknownProperty,
                        pctx + ": not allowed for any target type list (" + lists + ")");
        }

        if (has_nested) {
            std::string derived = em.id + "/" + pm.property;
            pm.nested = std::make_shared<const EntityMap>(parse_entity_map(
                j["nested"], pctx, spec, v, /*top=*/false, translations, derived));
        } else if (pm.constant) {
            std::string s(trim(*pm.constant));
            if (!s.empty() && !lexical_matches(pm.datatype, s))
                throw Error(ErrorKind::Conversion,
                            pctx + ": constant \"" + s + "\" is not a valid " +
                                std::string(primitive_name(pm.datatype)));
        }
        return pm;
    }

    static void check_literal_ranges(const PropertyMap& pm, const PropertySpec& ps,
                                     const std::string& pctx,
                                     const std::vector<std::string>& types) {
        std::string_view want = primitive_name(pm.datatype);
        for (const auto& r : ps.ranges)
            if (r == want) return;
        std::string ranges;
        for (const auto& r : ps.ranges) ranges += (ranges.empty() ? "" : ", ") + r;
        std::string tl;
        for (const auto& t : types) tl += (tl.empty() ? "" : " ") + t;
        throw Error(ErrorKind::RangeMismatch, pctx + ": datatype " + std::string(want) +
                                                  " is not among the ranges [" + ranges +
                                                  "] for types [" + tl + "]");
    }

    static void check_nested_ranges(const Json& nested_json, const PropertyMap& pm,
                                    const PropertySpec& ps, const std::string& pctx,
                                    const DomainSpecification& spec, const Vocabulary& v,
                                    const std::vector<std::string>& types) {
        (void)pm;
        (void)spec;
        // peek at the nested "types" without fully parsing the map yet
        expect_object(nested_json, pctx + " nested");
        const Json& nt = expect_member(nested_json, "types", pctx + " nested");
        if (!nt.is_array()) return;  // reported by the recursive parse
        for (const Json& t : nt) {
            if (!t.is_string()) continue;
            std::string tn = t.get<std::string>();
            bool fits = false;
            for (const auto& r : ps.ranges) {
                if (is_primitive_name(r)) continue;
                if (v.has_type(tn) && v.is_subtype_of(tn, r)) {
                    fits = true;
                    break;
                }
            }
            if (!fits) {
                std::string ranges;
                for (const auto& r : ps.ranges) ranges += (ranges.empty() ? "" : ", ") + r;
                std::string tl;
                for (const auto& x : types) tl += (tl.empty() ? "" : " ") + x;
                throw Error(ErrorKind::RangeMismatch,
                            pctx + ": nested type \"" + tn +
                                "\" is not a subtype of any structured range in [" + ranges +
                                "] for types [" + tl + "]");
            }
        }
    }

    // ---- execution ----------------------------------------------------

    void build_top_entity(const EntityMap& em, const XmlNode& el, ExecutionResult& res,
                          std::map<std::string, std::string>& ids_seen) const {
        std::vector<std::string> types;
        if (em.is_dynamic()) {
            auto vals = eval_path(*em.type_path, el);
            std::string token = vals.empty() ? std::string() : value_text(vals.front());
            token = std::string(trim(token));
            if (token.empty()) {
                ++res.stats.entities_skipped;
                return;
            }
            res.stats.source_types_seen.insert(token);
            auto it = translations_.find(token);
            if (it == translations_.end() || it->second.empty()) {
                ++res.stats.entities_skipped;
                return;
            }
            res.stats.source_types_mapped.insert(token);
            types = it->second;
        } else {
            types = em.static_types;
        }

        AnnotationDocument doc = build_entity(em, el, types);

        if (em.id_path) {
            auto vals = eval_path(*em.id_path, el);
            std::vector<std::string> texts;
            for (const auto& pv : vals) {
                std::string t(trim(value_text(pv)));
                if (!t.empty()) texts.push_back(std::move(t));
            }
            if (texts.size() > 1)
                throw Error(ErrorKind::Conversion, "entity map \"" + em.id + "\": idPath \"" +
                                                       em.id_path->source + "\" yielded " +
                                                       std::to_string(texts.size()) + " values");
            if (texts.size() == 1) doc.id = texts.front();
        }
        if (!doc.id) doc.id = sha256_hex(canonical_serialize(doc));

        auto [it, inserted] = ids_seen.emplace(*doc.id, em.id);
        if (!inserted)
            throw Error(ErrorKind::IdCollision, "entity maps \"" + it->second + "\" and \"" +
                                                    em.id + "\" both yielded id \"" + *doc.id +
                                                    "\"");
        for (const auto& t : types) res.stats.target_types_used.insert(t);
        ++res.stats.entities_emitted;
        res.documents.push_back(std::move(doc));
    }

    AnnotationDocument build_entity(const EntityMap& em, const XmlNode& el,
                                    const std::vector<std::string>& types) const {
        AnnotationDocument doc;
        doc.types = types;
        const std::set<std::string>* allowed = nullptr;
        auto it = em.allowed_by_key.find(EntityMap::type_list_key(types));
        if (it != em.allowed_by_key.end()) allowed = &it->second;

        for (const auto& pm : em.properties) {
            // dynamic maps: drop rules whose property the resolved types do not allow
            if (allowed && !allowed->count(pm.property)) continue;
            if (pm.nested) {
                for (const PathValue& m : eval_path(pm.nested->iterator, el)) {
                    AnnotationDocument sub =
                        build_entity(*pm.nested, *m.node, pm.nested->static_types);
                    if (sub.properties.empty()) continue;  // nothing extracted, drop the shell
                    doc.add(pm.property, Entity(std::move(sub)));
                }
            } else if (pm.constant) {
                if (auto val = make_literal(pm, std::string(trim(*pm.constant)), nullptr, em))
                    doc.add(pm.property, std::move(*val));
            } else {
                for (const PathValue& pv : eval_path(*pm.path, el)) {
                    std::string s(trim(value_text(pv)));
                    if (auto val = make_literal(pm, std::move(s), pv.node, em))
                        doc.add(pm.property, std::move(*val));
                }
            }
        }
        return doc;
    }

    std::optional<Value> make_literal(const PropertyMap& pm, std::string s, const XmlNode* src,
                                      const EntityMap& em) const {
        if (s.empty()) return std::nullopt;
        if (!lexical_matches(pm.datatype, s))
            throw Error(ErrorKind::Conversion,
                        "entity map \"" + em.id + "\", property \"" + pm.property + "\"" +
                            (pm.path ? ", path \"" + pm.path->source + "\"" : std::string()) +
                            ": value \"" + s + "\" is not a valid " +
                            std::string(primitive_name(pm.datatype)));
        switch (pm.datatype) {
            case Primitive::Text: {
                std::string tag;
                if (pm.lang) {
                    tag = *pm.lang;
                } else if (pm.lang_attr && src) {
                    if (const std::string* a = src->attribute(*pm.lang_attr)) {
                        tag = *a;
                        if (!is_language_tag(tag))
                            throw Error(ErrorKind::Conversion,
                                        "entity map \"" + em.id + "\", property \"" +
                                            pm.property + "\": malformed language tag \"" + tag +
                                            "\"");
                    }
                }
                if (tag.empty()) return Literal(std::move(s));
                return LangLiteral{std::move(s), std::move(tag)};
            }
            case Primitive::Number:
                return number_literal(s);
            case Primitive::Boolean:
                return Literal(s == "true" || s == "1");
            case Primitive::Date:
            case Primitive::DateTime:
            case Primitive::Time:
            case Primitive::Url:
                return Literal(std::move(s));
        }
        return Literal(std::move(s));
    }

    /// Digits-only lexicals become JSON integers, lexicals with a decimal
    /// point become JSON doubles, so "5" and "5.0" remain distinct.
    static Literal number_literal(std::string_view s) {
        std::string t(s);
        if (!t.empty() && t.front() == '+') t.erase(0, 1);
        if (t.find('.') == std::string::npos) {
            std::int64_t n = 0;
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
            if (ec == std::errc() && p == t.data() + t.size()) return Literal(n);
        } else {
            if (t.front() == '.') t.insert(t.begin(), '0');
            if (t.back() == '.') t.push_back('0');
            double d = 0;
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), d);
            if (ec == std::errc() && p == t.data() + t.size()) return Literal(d);
        }
        // overflow of the integer form: fall back to the closest double
        double d = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), d);
        (void)p;
        if (ec != std::errc())
            throw Error(ErrorKind::Conversion, "cannot convert \"" + std::string(s) + "\" to Number");
        return Literal(d);
    }
};

/// Coverage statistics over a document list (Table-2 shape).
inline MappingStats mapping_stats(const MappingDocument& m, const std::vector<XmlNode>& docs) {
    return m.stats(docs);
}

}  // namespace anno
