// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anno/errors.hpp"
#include "anno/strings.hpp"
#include "anno/xml.hpp"

namespace anno {

/// Path expressions select nodes and values out of a parsed XML tree:
///
///   path := step ("/" step)*
///   step := NAME ("[" "@" NAME "=" '"' LITERAL '"' "]")?   child element
///         | "@" NAME                                        attribute value
///         | "text()"                                        direct text
///
/// A single leading "/" anchors the expression at the document, in which
/// case the first step matches the root element itself. Attribute and text
/// steps may only appear last. This is deliberately not XPath: no "//",
/// no indexes, no other functions.
struct AttrPredicate {
    std::string attribute;
    std::string value;

    bool operator==(const AttrPredicate&) const = default;
};

struct PathStep {
    enum class Kind { Child, Attr, Text };

    Kind kind = Kind::Child;
    std::string name;                        // Child and Attr
    std::optional<AttrPredicate> predicate;  // Child only

    bool operator==(const PathStep&) const = default;
};

struct PathExpr {
    bool absolute = false;
    std::vector<PathStep> steps;
    std::string source;  // original text, kept for messages and re-serialization

    bool operator==(const PathExpr& o) const {
        return absolute == o.absolute && steps == o.steps;
    }
};

namespace detail {

class PathParser {
public:
    explicit PathParser(std::string_view text) : in_(text) {}

    PathExpr parse() {
        PathExpr expr;
        expr.source = std::string(in_);
        if (!eof() && peek() == '/') {
            expr.absolute = true;
            ++pos_;
        }
        expr.steps.push_back(parse_step());
        while (!eof()) {
            if (peek() != '/') fail("expected '/'");
            ++pos_;
            expr.steps.push_back(parse_step());
        }
        for (std::size_t i = 0; i + 1 < expr.steps.size(); ++i)
            if (expr.steps[i].kind != PathStep::Kind::Child)
                throw Error(ErrorKind::Parse,
                            "path \"" + expr.source +
                                "\": attribute and text() steps must be the final step");
        return expr;
    }

private:
    std::string_view in_;
    std::size_t pos_ = 0;

    bool eof() const { return pos_ >= in_.size(); }
    char peek() const { return in_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::Parse, "path \"" + std::string(in_) + "\": " + msg +
                                          " at offset " + std::to_string(pos_));
    }

    static bool is_name_char(char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
               c == '_' || c == ':' || c == '-' || c == '.' ||
               static_cast<unsigned char>(c) >= 0x80;
    }

    std::string parse_name() {
        std::string name;
        while (!eof() && is_name_char(peek())) name += in_[pos_++];
        if (name.empty()) fail("expected a name");
        return name;
    }

    PathStep parse_step() {
        if (eof()) fail("expected a step");
        PathStep step;
        if (peek() == '@') {
            ++pos_;
            step.kind = PathStep::Kind::Attr;
            step.name = parse_name();
            return step;
        }
        std::string name = parse_name();
        if (name == "text" && !eof() && peek() == '(') {
            ++pos_;
            if (eof() || peek() != ')') fail("expected ')'");
            ++pos_;
            step.kind = PathStep::Kind::Text;
            return step;
        }
        step.kind = PathStep::Kind::Child;
        step.name = std::move(name);
        if (!eof() && peek() == '[') {
            ++pos_;
            if (eof() || peek() != '@') fail("expected '@'");
            ++pos_;
            AttrPredicate pred;
            pred.attribute = parse_name();
            if (eof() || peek() != '=') fail("expected '='");
            ++pos_;
            if (eof() || peek() != '"') fail("expected '\"'");
            ++pos_;
            while (!eof() && peek() != '"') pred.value += in_[pos_++];
            if (eof()) fail("unterminated literal");
            ++pos_;  // closing quote
            if (eof() || peek() != ']') fail("expected ']'");
            ++pos_;
            step.predicate = std::move(pred);
        }
        return step;
    }
};

}  // namespace detail

inline PathExpr parse_path(std::string_view text) {
    return detail::PathParser(text).parse();
}

/// One evaluation result: either a reference to an element in the input
/// tree, or an extracted text value (from an attribute or text() step).
/// Node pointers stay valid as long as the evaluated tree lives.
struct PathValue {
    const XmlNode* node = nullptr;
    std::string text;

    bool is_node() const { return node != nullptr; }
};

namespace detail {

inline bool step_matches(const PathStep& step, const XmlNode& el) {
    if (!el.is_element() || el.name != step.name) return false;
    if (step.predicate) {
        const std::string* v = el.attribute(step.predicate->attribute);
        if (!v || *v != step.predicate->value) return false;
    }
    return true;
}

inline void eval_step(const PathStep& step, const XmlNode& context,
                      std::vector<PathValue>& out) {
    switch (step.kind) {
        case PathStep::Kind::Child:
            for (const auto& c : context.children)
                if (step_matches(step, c)) out.push_back(PathValue{&c, {}});
            break;
        case PathStep::Kind::Attr:
            if (const std::string* v = context.attribute(step.name))
                out.push_back(PathValue{nullptr, *v});
            break;
        case PathStep::Kind::Text: {
            std::string t = context.direct_text();
            if (!t.empty()) out.push_back(PathValue{nullptr, std::move(t)});
            break;
        }
    }
}

inline std::vector<PathValue> eval_steps(const PathExpr& expr, std::size_t first_step,
                                         const XmlNode& context) {
    std::vector<PathValue> current;
    current.push_back(PathValue{&context, {}});
    for (std::size_t s = first_step; s < expr.steps.size(); ++s) {
        std::vector<PathValue> next;
        for (const auto& v : current)
            if (v.is_node()) eval_step(expr.steps[s], *v.node, next);
        current = std::move(next);
        if (current.empty()) break;
    }
    return current;
}

}  // namespace detail

/// Evaluate relative to a context element. Results are in document order;
/// no match yields an empty list.
inline std::vector<PathValue> eval_path(const PathExpr& expr, const XmlNode& context) {
    return detail::eval_steps(expr, 0, context);
}

/// Evaluate against the document: the first step must match the root
/// element itself (the usual reading of an absolute path), remaining steps
/// descend from there.
inline std::vector<PathValue> eval_path_from_document(const PathExpr& expr,
                                                      const XmlNode& root) {
    if (expr.steps.empty()) return {};
    const PathStep& first = expr.steps.front();
    if (first.kind != PathStep::Kind::Child || !detail::step_matches(first, root)) return {};
    return detail::eval_steps(expr, 1, root);
}

}  // namespace anno
