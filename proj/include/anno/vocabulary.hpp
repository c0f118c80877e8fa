// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anno/errors.hpp"
#include "anno/jsonutil.hpp"

namespace anno {

/// The primitive datatype names. These are reserved: a vocabulary may not
/// declare a type with one of these names.
inline constexpr std::array<std::string_view, 7> kPrimitiveNames = {
    "Text", "Number", "Boolean", "Date", "DateTime", "Time", "URL"};

inline bool is_primitive_name(std::string_view name) {
    return std::find(kPrimitiveNames.begin(), kPrimitiveNames.end(), name) !=
           kPrimitiveNames.end();
}

struct TypeDef {
    std::string name;
    std::vector<std::string> parents;  // multiple inheritance permitted

    bool operator==(const TypeDef&) const = default;
};

struct PropertyDef {
    std::string name;
    std::vector<std::string> ranges;  // file order

    bool operator==(const PropertyDef&) const = default;
};

/// A frozen schema.org subset: the type hierarchy plus property range
/// declarations. Immutable after load; all queries are pure and safe to
/// call concurrently.
class Vocabulary {
public:
    /// Load from the vocabulary file format:
    ///   {"version": s, "types": [{"name": s, "parents": [s]}],
    ///    "properties": [{"name": s, "ranges": [s]}]}
    /// Unknown keys are rejected. Checks that parents and ranges resolve and
    /// that the subtype graph is acyclic.
    static Vocabulary load(std::string_view bytes) {
        const std::string what = "vocabulary";
        Json j = parse_json(bytes, what);
        expect_object(j, what);
        reject_unknown_keys(j, {"version", "types", "properties"}, what);

        Vocabulary v;
        v.version_ = expect_string(j, "version", what);
        for (const Json& t : expect_array(j, "types", what)) {
            expect_object(t, what + " type");
            reject_unknown_keys(t, {"name", "parents"}, what + " type");
            TypeDef def;
            def.name = expect_string(t, "name", what + " type");
            if (def.name.empty())
                throw Error(ErrorKind::Parse, what + ": type name must be non-empty");
            if (is_primitive_name(def.name))
                throw Error(ErrorKind::Parse,
                            what + ": \"" + def.name + "\" is a reserved datatype name");
            if (t.contains("parents"))
                for (const Json& p : expect_array(t, "parents", what + " type " + def.name))
                    def.parents.push_back(p.get<std::string>());
            if (!v.type_index_.emplace(def.name, v.types_.size()).second)
                throw Error(ErrorKind::Parse, what + ": duplicate type \"" + def.name + "\"");
            v.types_.push_back(std::move(def));
        }
        for (const Json& p : expect_array(j, "properties", what)) {
            expect_object(p, what + " property");
            reject_unknown_keys(p, {"name", "ranges"}, what + " property");
            PropertyDef def;
            def.name = expect_string(p, "name", what + " property");
            if (def.name.empty())
                throw Error(ErrorKind::Parse, what + ": property name must be non-empty");
            for (const Json& r : expect_array(p, "ranges", what + " property " + def.name))
                def.ranges.push_back(r.get<std::string>());
            if (def.ranges.empty())
                throw Error(ErrorKind::Parse,
                            what + ": property \"" + def.name + "\" has no ranges");
            if (!v.property_index_.emplace(def.name, v.properties_.size()).second)
                throw Error(ErrorKind::Parse,
                            what + ": duplicate property \"" + def.name + "\"");
            v.properties_.push_back(std::move(def));
        }

        for (const auto& t : v.types_)
            for (const auto& parent : t.parents)
                if (!v.has_type(parent))
                    throw Error(ErrorKind::DanglingReference,
                                "type \"" + t.name + "\" names missing parent \"" + parent + "\"");
        for (const auto& p : v.properties_)
            for (const auto& r : p.ranges)
                if (!is_primitive_name(r) && !v.has_type(r))
                    throw Error(ErrorKind::DanglingReference,
                                "property \"" + p.name + "\" names missing range \"" + r + "\"");
        v.check_acyclic();
        return v;
    }

    static Vocabulary load_file(const std::filesystem::path& path) {
        return load(read_file(path));
    }

    std::string serialize() const {
        Json j;
        j["version"] = version_;
        j["types"] = Json::array();
        for (const auto& t : types_)
            j["types"].push_back({{"name", t.name}, {"parents", t.parents}});
        j["properties"] = Json::array();
        for (const auto& p : properties_)
            j["properties"].push_back({{"name", p.name}, {"ranges", p.ranges}});
        return j.dump(2) + "\n";
    }

    const std::string& version() const { return version_; }
    const std::vector<TypeDef>& types() const { return types_; }
    const std::vector<PropertyDef>& properties() const { return properties_; }

    bool has_type(std::string_view name) const {
        return type_index_.find(std::string(name)) != type_index_.end();
    }

    bool has_property(std::string_view name) const {
        return property_index_.find(std::string(name)) != property_index_.end();
    }

    /// True iff `super_name` is reachable from `sub_name` via parent edges,
    /// or the two are equal. Throws for names not in the vocabulary.
    bool is_subtype_of(std::string_view sub_name, std::string_view super_name) const {
        std::size_t sub = index_of(sub_name);
        std::size_t super = index_of(super_name);
        if (sub == super) return true;
        std::vector<std::size_t> stack{sub};
        std::vector<bool> seen(types_.size(), false);
        seen[sub] = true;
        while (!stack.empty()) {
            std::size_t cur = stack.back();
            stack.pop_back();
            for (const auto& parent : types_[cur].parents) {
                std::size_t pi = type_index_.at(parent);
                if (pi == super) return true;
                if (!seen[pi]) {
                    seen[pi] = true;
                    stack.push_back(pi);
                }
            }
        }
        return false;
    }

    /// Declared ranges of a property, in file order.
    const std::vector<std::string>& property_ranges(std::string_view prop) const {
        auto it = property_index_.find(std::string(prop));
        if (it == property_index_.end())
            throw Error(ErrorKind::UnknownProperty, "property \"" + std::string(prop) +
                                                        "\" is not in the vocabulary");
        return properties_[it->second].ranges;
    }

    bool operator==(const Vocabulary& o) const {
        return version_ == o.version_ && types_ == o.types_ && properties_ == o.properties_;
    }

private:
    std::size_t index_of(std::string_view name) const {
        auto it = type_index_.find(std::string(name));
        if (it == type_index_.end())
            throw Error(ErrorKind::UnknownType,
                        "type \"" + std::string(name) + "\" is not in the vocabulary");
        return it->second;
    }

    void check_acyclic() const {
        // 0 = unvisited, 1 = on stack, 2 = done
        std::vector<int> state(types_.size(), 0);
        std::vector<std::size_t> path;
        for (std::size_t i = 0; i < types_.size(); ++i)
            if (state[i] == 0) dfs(i, state, path);
    }

    void dfs(std::size_t i, std::vector<int>& state, std::vector<std::size_t>& path) const {
        state[i] = 1;
        path.push_back(i);
        for (const auto& parent : types_[i].parents) {
            std::size_t pi = type_index_.at(parent);
            if (state[pi] == 1) {
                std::string cycle;
                auto it = std::find(path.begin(), path.end(), pi);
                for (; it != path.end(); ++it) cycle += types_[*it].name + " -> ";
                cycle += types_[pi].name;
                throw Error(ErrorKind::Cycle, "subtype graph has a cycle: " + cycle);
            }
            if (state[pi] == 0) dfs(pi, state, path);
        }
        path.pop_back();
        state[i] = 2;
    }

    std::string version_;
    std::vector<TypeDef> types_;
    std::vector<PropertyDef> properties_;
    std::unordered_map<std::string, std::size_t> type_index_;
    std::unordered_map<std::string, std::size_t> property_index_;
};

}  // namespace anno
