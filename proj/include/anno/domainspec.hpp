// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anno/datatype.hpp"
#include "anno/errors.hpp"
#include "anno/jsonutil.hpp"
#include "anno/vocabulary.hpp"

namespace anno {

struct PropertySpec {
    std::string name;
    std::vector<std::string> ranges;  // non-empty; subset of (or subtypes of) vocabulary ranges
    bool required = false;
    bool multiple = true;  // schema.org properties are repeatable by default

    bool operator==(const PropertySpec&) const = default;
};

struct TypeSpec {
    std::string name;
    std::vector<PropertySpec> properties;  // file order

    const PropertySpec* find(std::string_view prop) const {
        for (const auto& p : properties)
            if (p.name == prop) return &p;
        return nullptr;
    }

    bool operator==(const TypeSpec&) const = default;
};

/// A domain specification: per-type curated property subsets with required
/// flags and permitted ranges, closed under structured ranges (every
/// structured type used as a range has its own TypeSpec). Immutable after
/// parse; queries are pure.
class DomainSpecification {
public:
    /// Parse and check against a vocabulary. File format:
    ///   {"name": s, "types": {"Hotel": {"properties": [
    ///       {"name": s, "ranges": [s], "required": bool, "multiple": bool}]}}}
    static DomainSpecification parse(std::string_view bytes, const Vocabulary& v) {
        const std::string what = "domain specification";
        Json j = parse_json(bytes, what);
        expect_object(j, what);
        reject_unknown_keys(j, {"name", "types"}, what);

        DomainSpecification spec;
        spec.name_ = expect_string(j, "name", what);
        const Json& types = expect_member(j, "types", what);
        expect_object(types, what + " \"types\"");
        for (auto it = types.begin(); it != types.end(); ++it) {
            const std::string& type_name = it.key();
            if (!v.has_type(type_name))
                throw Error(ErrorKind::UnknownType,
                            what + ": type \"" + type_name + "\" is not in the vocabulary");
            const std::string ctx = what + " type " + type_name;
            expect_object(*it, ctx);
            reject_unknown_keys(*it, {"properties"}, ctx);
            TypeSpec ts;
            ts.name = type_name;
            for (const Json& p : expect_array(*it, "properties", ctx)) {
                expect_object(p, ctx + " property");
                reject_unknown_keys(p, {"name", "ranges", "required", "multiple"},
                                    ctx + " property");
                PropertySpec ps;
                ps.name = expect_string(p, "name", ctx + " property");
                for (const Json& r : expect_array(p, "ranges", ctx + " property " + ps.name))
                    ps.ranges.push_back(r.get<std::string>());
                if (ps.ranges.empty())
                    throw Error(ErrorKind::Parse,
                                ctx + ": property \"" + ps.name + "\" has no ranges");
                if (p.contains("required")) ps.required = p["required"].get<bool>();
                if (p.contains("multiple")) ps.multiple = p["multiple"].get<bool>();
                if (ts.find(ps.name))
                    throw Error(ErrorKind::Parse,
                                ctx + ": duplicate property \"" + ps.name + "\"");
                check_narrowing(type_name, ps, v);
                ts.properties.push_back(std::move(ps));
            }
            spec.type_specs_.emplace(type_name, std::move(ts));
        }
        spec.check_closure();
        return spec;
    }

    static DomainSpecification parse_file(const std::filesystem::path& path,
                                          const Vocabulary& v) {
        return parse(read_file(path), v);
    }

    std::string serialize() const {
        Json types = Json::object();
        for (const auto& [name, ts] : type_specs_) {
            Json props = Json::array();
            for (const auto& p : ts.properties)
                props.push_back({{"name", p.name},
                                 {"ranges", p.ranges},
                                 {"required", p.required},
                                 {"multiple", p.multiple}});
            types[name] = {{"properties", std::move(props)}};
        }
        Json j;
        j["name"] = name_;
        j["types"] = std::move(types);
        return j.dump(2) + "\n";
    }

    const std::string& name() const { return name_; }
    const std::map<std::string, TypeSpec>& type_specs() const { return type_specs_; }

    const TypeSpec* find(std::string_view type_name) const {
        auto it = type_specs_.find(std::string(type_name));
        return it == type_specs_.end() ? nullptr : &it->second;
    }

    bool has_type(std::string_view type_name) const { return find(type_name) != nullptr; }

    /// Union of the PropertySpecs of all listed types, for multi-typed
    /// entities. On a name collision the ranges are unioned (first-seen
    /// order), `required` is set if any listed type requires the property,
    /// and `multiple` is set if any listed type permits repetition. Order
    /// of `type_names` does not affect the result.
    std::map<std::string, PropertySpec> allowed_properties(
        std::span<const std::string> type_names) const {
        std::map<std::string, PropertySpec> merged;
        for (const auto& tn : type_names) {
            const TypeSpec* ts = find(tn);
            if (!ts)
                throw Error(ErrorKind::UnknownType,
                            "type \"" + tn + "\" has no TypeSpec in \"" + name_ + "\"");
            for (const auto& p : ts->properties) {
                auto [it, inserted] = merged.emplace(p.name, p);
                if (!inserted) {
                    for (const auto& r : p.ranges)
                        if (std::find(it->second.ranges.begin(), it->second.ranges.end(), r) ==
                            it->second.ranges.end())
                            it->second.ranges.push_back(r);
                    // canonical order on collision keeps the union insensitive
                    // to the order of type_names
                    std::sort(it->second.ranges.begin(), it->second.ranges.end());
                    it->second.required = it->second.required || p.required;
                    it->second.multiple = it->second.multiple || p.multiple;
                }
            }
        }
        return merged;
    }

    bool operator==(const DomainSpecification& o) const {
        return name_ == o.name_ && type_specs_ == o.type_specs_;
    }

private:
    static void check_narrowing(const std::string& type_name, const PropertySpec& ps,
                                const Vocabulary& v) {
        if (!v.has_property(ps.name))
            throw Error(ErrorKind::UnknownProperty, "type " + type_name + ": property \"" +
                                                        ps.name +
                                                        "\" is not in the vocabulary");
        const auto& declared = v.property_ranges(ps.name);
        for (const auto& r : ps.ranges) {
            bool ok = false;
            for (const auto& d : declared) {
                if (r == d) {
                    ok = true;
                    break;
                }
                // a structured spec range may narrow to a subtype of a declared range
                if (!is_primitive_name(r) && !is_primitive_name(d) && v.has_type(r) &&
                    v.is_subtype_of(r, d)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                std::string expected;
                for (const auto& d : declared) expected += (expected.empty() ? "" : ", ") + d;
                throw Error(ErrorKind::RangeMismatch,
                            "type " + type_name + ", property \"" + ps.name + "\": range \"" +
                                r + "\" does not narrow the vocabulary ranges [" + expected +
                                "]");
            }
        }
    }

    void check_closure() const {
        for (const auto& [tn, ts] : type_specs_)
            for (const auto& p : ts.properties)
                for (const auto& r : p.ranges)
                    if (!is_primitive_name(r) && type_specs_.find(r) == type_specs_.end())
                        throw Error(ErrorKind::MissingClosure,
                                    "type " + tn + ", property \"" + p.name +
                                        "\": structured range \"" + r +
                                        "\" has no TypeSpec in this specification");
    }

    std::string name_;
    std::map<std::string, TypeSpec> type_specs_;
};

}  // namespace anno
