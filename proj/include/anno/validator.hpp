// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "anno/annotation.hpp"
#include "anno/datatype.hpp"
#include "anno/domainspec.hpp"
#include "anno/errors.hpp"
#include "anno/vocabulary.hpp"

namespace anno {

enum class ViolationCode {
    UnknownType,
    UnknownProperty,
    MissingRequired,
    RangeViolation,
    CardinalityViolation,
    MalformedLiteral,
};

inline std::string_view to_string(ViolationCode c) {
    switch (c) {
        case ViolationCode::UnknownType: return "UNKNOWN_TYPE";
        case ViolationCode::UnknownProperty: return "UNKNOWN_PROPERTY";
        case ViolationCode::MissingRequired: return "MISSING_REQUIRED";
        case ViolationCode::RangeViolation: return "RANGE_VIOLATION";
        case ViolationCode::CardinalityViolation: return "CARDINALITY_VIOLATION";
        case ViolationCode::MalformedLiteral: return "MALFORMED_LITERAL";
    }
    return "?";
}

/// One conformance defect. `path` is the slash-delimited property path from
/// the document root; a value index is inserted only when the property holds
/// more than one value (e.g. "/makesOffer/1/price").
struct Violation {
    ViolationCode code;
    std::string path;
    std::string message;
    std::string expected;
    std::string found;

    bool operator==(const Violation&) const = default;
};

struct ViolationReport {
    std::string document_id;
    std::vector<Violation> violations;

    bool conformant() const { return violations.empty(); }
};

struct CorpusSummary {
    std::int64_t documents_checked = 0;
    std::int64_t documents_valid = 0;
    std::int64_t unreadable_files = 0;
    std::map<std::string, std::int64_t> violations_by_code;
    std::vector<ViolationReport> reports;  // sorted by document id

    bool clean() const { return violations_by_code.empty() && unreadable_files == 0; }
};

namespace detail {

class Validator {
public:
    Validator(const DomainSpecification& spec, const Vocabulary& v) : spec_(spec), vocab_(v) {}

    ViolationReport run(const AnnotationDocument& doc) {
        ViolationReport report;
        report.document_id = doc.id.value_or("");
        out_ = &report.violations;
        check_entity(doc, "");
        out_ = nullptr;
        return report;
    }

private:
    const DomainSpecification& spec_;
    const Vocabulary& vocab_;
    std::vector<Violation>* out_ = nullptr;

    void add(ViolationCode code, std::string path, std::string message, std::string expected,
             std::string found) {
        out_->push_back({code, path.empty() ? "/" : std::move(path), std::move(message),
                         std::move(expected), std::move(found)});
    }

    static std::string join(const std::vector<std::string>& xs) {
        std::string s;
        for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
        return s;
    }

    void check_entity(const AnnotationDocument& doc, const std::string& prefix) {
        std::vector<std::string> known;
        for (const auto& t : doc.types) {
            if (spec_.has_type(t)) {
                known.push_back(t);
            } else {
                add(ViolationCode::UnknownType, prefix, "type \"" + t + "\" is not defined",
                    "a type defined by \"" + spec_.name() + "\"", t);
            }
        }
        if (known.empty()) return;  // no property contract to check against

        auto allowed = spec_.allowed_properties(known);

        for (const auto& [pname, ps] : allowed) {
            if (ps.required && !doc.properties.count(pname))
                add(ViolationCode::MissingRequired, prefix + "/" + pname,
                    "required property \"" + pname + "\" is missing", "at least 1 value",
                    "absent");
        }

        for (const auto& [pname, values] : doc.properties) {
            const std::string ppath = prefix + "/" + pname;
            auto it = allowed.find(pname);
            if (it == allowed.end()) {
                add(ViolationCode::UnknownProperty, ppath,
                    "property \"" + pname + "\" is not allowed for types [" + join(doc.types) +
                        "]",
                    "one of: " + join_keys(allowed), pname);
                continue;
            }
            const PropertySpec& ps = it->second;
            if (!ps.multiple && values.size() > 1)
                add(ViolationCode::CardinalityViolation, ppath,
                    "property \"" + pname + "\" allows a single value", "1 value",
                    std::to_string(values.size()) + " values");

            for (std::size_t i = 0; i < values.size(); ++i) {
                std::string vpath = ppath;
                if (values.size() > 1) vpath += "/" + std::to_string(i);
                check_value(values[i], ps, vpath);
            }
        }
    }

    static std::string join_keys(const std::map<std::string, PropertySpec>& m) {
        std::string s;
        for (const auto& [k, v] : m) {
            (void)v;
            s += (s.empty() ? "" : ", ") + k;
        }
        return s;
    }

    void check_value(const Value& value, const PropertySpec& ps, const std::string& vpath) {
        std::vector<std::string> prims, structs;
        for (const auto& r : ps.ranges) (is_primitive_name(r) ? prims : structs).push_back(r);

        if (const auto* ent = std::get_if<Entity>(&value)) {
            if (structs.empty()) {
                add(ViolationCode::RangeViolation, vpath,
                    "structured value where only literals are allowed", join(prims),
                    "entity [" + join(ent->doc().types) + "]");
            } else {
                for (const auto& t : ent->doc().types) {
                    if (!vocab_.has_type(t)) continue;  // recursion reports UNKNOWN_TYPE
                    bool fits = std::any_of(structs.begin(), structs.end(), [&](const auto& r) {
                        return vocab_.is_subtype_of(t, r);
                    });
                    if (!fits)
                        add(ViolationCode::RangeViolation, vpath,
                            "type \"" + t + "\" does not fit the declared ranges", join(structs),
                            t);
                }
            }
            check_entity(ent->doc(), vpath);
            return;
        }

        if (const auto* ll = std::get_if<LangLiteral>(&value)) {
            (void)ll;
            if (std::find(prims.begin(), prims.end(), "Text") == prims.end()) {
                if (prims.empty())
                    add(ViolationCode::RangeViolation, vpath,
                        "literal value where only structured values are allowed", join(structs),
                        "language-tagged literal");
                else
                    add(ViolationCode::MalformedLiteral, vpath,
                        "language-tagged literal requires a Text range", join(prims),
                        "language-tagged literal");
            }
            return;
        }

        const Literal& lit = std::get<Literal>(value);
        if (prims.empty()) {
            add(ViolationCode::RangeViolation, vpath,
                "literal value where only structured values are allowed", join(structs),
                literal_description(lit));
            return;
        }
        bool ok = std::any_of(prims.begin(), prims.end(),
                              [&](const auto& r) { return literal_satisfies(lit, r); });
        if (!ok)
            add(ViolationCode::MalformedLiteral, vpath,
                "literal does not match any allowed primitive range", join(prims),
                literal_description(lit));
    }

    static bool literal_satisfies(const Literal& lit, const std::string& range) {
        if (range == "Text") return true;
        if (const auto* s = std::get_if<std::string>(&lit.value)) {
            auto prim = primitive_from_name(range);
            return prim && lexical_matches(*prim, *s);
        }
        if (std::holds_alternative<std::int64_t>(lit.value) ||
            std::holds_alternative<double>(lit.value))
            return range == "Number";
        return range == "Boolean";  // bool alternative
    }

    static std::string literal_description(const Literal& lit) {
        return std::visit(
            [](const auto& x) -> std::string {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, std::string>) return "\"" + x + "\"";
                else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
                else return std::to_string(x);
            },
            lit.value);
    }
};

}  // namespace detail

inline ViolationReport validate_document(const AnnotationDocument& doc,
                                         const DomainSpecification& spec, const Vocabulary& v) {
    return detail::Validator(spec, v).run(doc);
}

/// Validate every *.json annotation under `dir` (searched recursively,
/// repository metadata files excluded). Unreadable or unparsable files are
/// counted, reported with a pseudo-violation free report entry, and do not
/// abort the walk.
inline CorpusSummary validate_corpus(const std::filesystem::path& dir,
                                     const DomainSpecification& spec, const Vocabulary& v) {
    CorpusSummary sum;
    std::vector<std::filesystem::path> files;
    if (std::filesystem::exists(dir)) {
        for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
            if (!e.is_regular_file()) continue;
            const auto& p = e.path();
            if (p.extension() != ".json") continue;
            if (p.filename() == "manifest.json") continue;
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        ++sum.documents_checked;
        AnnotationDocument doc;
        try {
            doc = parse_annotation(read_file(p));
        } catch (const Error& e) {
            ++sum.unreadable_files;
            ViolationReport r;
            r.document_id = p.filename().string();
            r.violations.push_back({ViolationCode::MalformedLiteral, "/",
                                    std::string("unreadable: ") + e.what(), "a parsable document",
                                    "error"});
            sum.violations_by_code[std::string(to_string(ViolationCode::MalformedLiteral))]++;
            sum.reports.push_back(std::move(r));
            continue;
        }
        ViolationReport r = validate_document(doc, spec, v);
        if (r.document_id.empty()) r.document_id = p.filename().string();
        if (r.conformant()) {
            ++sum.documents_valid;
        } else {
            for (const auto& viol : r.violations)
                sum.violations_by_code[std::string(to_string(viol.code))]++;
        }
        sum.reports.push_back(std::move(r));
    }
    std::sort(sum.reports.begin(), sum.reports.end(),
              [](const auto& a, const auto& b) { return a.document_id < b.document_id; });
    return sum;
}

}  // namespace anno
