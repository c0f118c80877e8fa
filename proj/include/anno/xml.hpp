// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anno/errors.hpp"
#include "anno/strings.hpp"

namespace anno {

/// One node of a parsed XML tree. Elements carry a name, attributes in
/// document order, and children; text nodes carry raw (entity-decoded) text.
/// Trees are immutable after parsing and safe to share across threads.
struct XmlNode {
    enum class Kind { Element, Text };

    Kind kind = Kind::Element;
    std::string name;                                              // elements
    std::vector<std::pair<std::string, std::string>> attributes;   // document order
    std::vector<XmlNode> children;                                 // elements
    std::string text;                                              // text nodes

    bool is_element() const { return kind == Kind::Element; }
    bool is_text() const { return kind == Kind::Text; }

    const std::string* attribute(std::string_view attr_name) const {
        for (const auto& [k, v] : attributes)
            if (k == attr_name) return &v;
        return nullptr;
    }

    /// Concatenation of the direct text children, whitespace-trimmed.
    std::string direct_text() const {
        std::string out;
        for (const auto& c : children)
            if (c.is_text()) out += c.text;
        return std::string(trim(out));
    }
};

namespace detail {

class XmlParser {
public:
    explicit XmlParser(std::string_view input) : in_(input) {}

    XmlNode parse_document() {
        skip_bom();
        skip_prolog_misc(/*allow_decl=*/true);
        if (eof()) fail("document has no root element");
        XmlNode root = parse_element(0);
        skip_prolog_misc(/*allow_decl=*/false);
        if (!eof()) {
            if (peek() == '<' && peek_at(1) != '!' && peek_at(1) != '?')
                fail("document must have exactly one root element");
            fail("unexpected content after root element");
        }
        return root;
    }

private:
    static constexpr int kMaxDepth = 200;

    std::string_view in_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    bool eof() const { return pos_ >= in_.size(); }
    char peek() const { return in_[pos_]; }
    char peek_at(std::size_t off) const {
        return pos_ + off < in_.size() ? in_[pos_ + off] : '\0';
    }

    char advance() {
        char c = in_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::Parse, "xml: " + msg + " at line " + std::to_string(line_) +
                                          ", column " + std::to_string(col_));
    }

    bool consume(std::string_view s) {
        if (in_.substr(pos_).substr(0, s.size()) != s) return false;
        for (std::size_t i = 0; i < s.size(); ++i) advance();
        return true;
    }

    void expect(std::string_view s, const char* what) {
        if (!consume(s)) fail(std::string("expected ") + what);
    }

    void skip_ws() {
        while (!eof() && is_space(peek())) advance();
    }

    void skip_bom() {
        if (in_.size() >= 3 && static_cast<unsigned char>(in_[0]) == 0xEF &&
            static_cast<unsigned char>(in_[1]) == 0xBB &&
            static_cast<unsigned char>(in_[2]) == 0xBF)
            pos_ = 3;
    }

    // Whitespace, comments, PIs, the XML declaration and a doctype are
    // allowed around the root element. Anything declaring entities or an
    // external DTD is rejected.
    void skip_prolog_misc(bool allow_decl) {
        bool decl_ok = allow_decl;
        for (;;) {
            skip_ws();
            if (eof()) return;
            if (decl_ok && consume("<?xml")) {
                parse_xml_decl();
                decl_ok = false;
                continue;
            }
            decl_ok = false;
            if (in_.substr(pos_).starts_with("<!--")) {
                skip_comment();
                continue;
            }
            if (in_.substr(pos_).starts_with("<?")) {
                skip_pi();
                continue;
            }
            if (in_.substr(pos_).starts_with("<!DOCTYPE")) {
                skip_doctype();
                continue;
            }
            return;
        }
    }

    void parse_xml_decl() {
        std::size_t end = in_.find("?>", pos_);
        if (end == std::string_view::npos) fail("unterminated xml declaration");
        std::string_view decl = in_.substr(pos_, end - pos_);
        std::size_t enc = ifind(decl, "encoding");
        if (enc != std::string_view::npos) {
            std::size_t q = decl.find_first_of("\"'", enc);
            if (q != std::string_view::npos) {
                char quote = decl[q];
                std::size_t qe = decl.find(quote, q + 1);
                if (qe != std::string_view::npos) {
                    std::string val(decl.substr(q + 1, qe - q - 1));
                    for (auto& c : val) c = to_lower_ascii(c);
                    if (val != "utf-8" && val != "utf8")
                        fail("unsupported encoding \"" + val + "\" (only UTF-8)");
                }
            }
        }
        while (pos_ < end + 2) advance();
    }

    void skip_comment() {
        expect("<!--", "comment");
        std::size_t end = in_.find("-->", pos_);
        if (end == std::string_view::npos) fail("unterminated comment");
        while (pos_ < end + 3) advance();
    }

    void skip_pi() {
        expect("<?", "processing instruction");
        std::size_t end = in_.find("?>", pos_);
        if (end == std::string_view::npos) fail("unterminated processing instruction");
        while (pos_ < end + 2) advance();
    }

    void skip_doctype() {
        expect("<!DOCTYPE", "doctype");
        int depth = 1;
        std::size_t start = pos_;
        while (!eof() && depth > 0) {
            char c = advance();
            if (c == '<') ++depth;
            else if (c == '>') --depth;
        }
        if (depth != 0) fail("unterminated doctype");
        std::string_view body = in_.substr(start, pos_ - start);
        if (body.find("SYSTEM") != std::string_view::npos ||
            body.find("PUBLIC") != std::string_view::npos ||
            body.find("<!ENTITY") != std::string_view::npos)
            throw Error(ErrorKind::ExternalEntity,
                        "xml: doctype with entity or external subset declarations is not supported");
    }

    static bool is_name_start(char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':' ||
               static_cast<unsigned char>(c) >= 0x80;
    }

    static bool is_name_char(char c) {
        return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
    }

    std::string parse_name() {
        if (eof() || !is_name_start(peek())) fail("expected a name");
        std::string name;
        while (!eof() && is_name_char(peek())) name += advance();
        return name;
    }

    // The five built-in entities plus numeric character references.
    void parse_entity(std::string& out) {
        expect("&", "entity");
        if (consume("#")) {
            std::uint32_t cp = 0;
            bool hex = consume("x");
            std::size_t digits = 0;
            while (!eof()) {
                char c = peek();
                std::uint32_t d;
                if (c >= '0' && c <= '9') d = static_cast<std::uint32_t>(c - '0');
                else if (hex && c >= 'a' && c <= 'f') d = static_cast<std::uint32_t>(c - 'a' + 10);
                else if (hex && c >= 'A' && c <= 'F') d = static_cast<std::uint32_t>(c - 'A' + 10);
                else break;
                cp = cp * (hex ? 16 : 10) + d;
                if (cp > 0x10FFFF) fail("character reference out of range");
                advance();
                ++digits;
            }
            if (digits == 0 || !consume(";")) fail("malformed character reference");
            append_utf8(out, cp);
            return;
        }
        std::string name;
        while (!eof() && peek() != ';' && !is_space(peek()) && name.size() <= 8)
            name += advance();
        if (!consume(";")) fail("unterminated entity reference");
        if (name == "amp") out += '&';
        else if (name == "lt") out += '<';
        else if (name == "gt") out += '>';
        else if (name == "apos") out += '\'';
        else if (name == "quot") out += '"';
        else fail("undeclared entity \"&" + name + ";\"");
    }

    static void append_utf8(std::string& out, std::uint32_t cp) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    std::string parse_attr_value() {
        if (eof() || (peek() != '"' && peek() != '\'')) fail("expected a quoted attribute value");
        char quote = advance();
        std::string value;
        for (;;) {
            if (eof()) fail("unterminated attribute value");
            char c = peek();
            if (c == quote) {
                advance();
                return value;
            }
            if (c == '<') fail("'<' in attribute value");
            if (c == '&') {
                parse_entity(value);
                continue;
            }
            value += advance();
        }
    }

    XmlNode parse_element(int depth) {
        if (depth > kMaxDepth) fail("element nesting too deep");
        expect("<", "element");
        XmlNode el;
        el.kind = XmlNode::Kind::Element;
        el.name = parse_name();
        for (;;) {
            bool had_ws = !eof() && is_space(peek());
            skip_ws();
            if (eof()) fail("unterminated start tag");
            if (consume("/>")) return el;
            if (consume(">")) break;
            if (!had_ws) fail("expected whitespace before attribute");
            std::string attr = parse_name();
            skip_ws();
            expect("=", "'=' after attribute name");
            skip_ws();
            std::string value = parse_attr_value();
            if (el.attribute(attr)) fail("duplicate attribute \"" + attr + "\"");
            el.attributes.emplace_back(std::move(attr), std::move(value));
        }
        // content
        std::string text;
        auto flush_text = [&] {
            if (!text.empty()) {
                XmlNode t;
                t.kind = XmlNode::Kind::Text;
                t.text = std::move(text);
                el.children.push_back(std::move(t));
                text.clear();
            }
        };
        for (;;) {
            if (eof()) fail("unterminated element <" + el.name + ">");
            char c = peek();
            if (c == '<') {
                if (in_.substr(pos_).starts_with("</")) {
                    flush_text();
                    expect("</", "end tag");
                    std::string end_name = parse_name();
                    skip_ws();
                    expect(">", "'>'");
                    if (end_name != el.name)
                        fail("mismatched end tag </" + end_name + "> for <" + el.name + ">");
                    return el;
                }
                if (in_.substr(pos_).starts_with("<!--")) {
                    skip_comment();
                    continue;
                }
                if (in_.substr(pos_).starts_with("<![CDATA[")) {
                    expect("<![CDATA[", "CDATA section");
                    std::size_t end = in_.find("]]>", pos_);
                    if (end == std::string_view::npos) fail("unterminated CDATA section");
                    while (pos_ < end) text += advance();
                    expect("]]>", "']]>'");
                    continue;
                }
                if (in_.substr(pos_).starts_with("<?")) {
                    skip_pi();
                    continue;
                }
                if (in_.substr(pos_).starts_with("<!")) fail("unexpected markup declaration");
                flush_text();
                el.children.push_back(parse_element(depth + 1));
                continue;
            }
            if (c == '&') {
                parse_entity(text);
                continue;
            }
            text += advance();
        }
    }
};

}  // namespace detail

/// Parse a UTF-8 XML byte stream into a tree, returning the root element.
/// Only the five built-in entities and numeric character references are
/// expanded; doctypes that declare entities or reference external subsets
/// are rejected.
inline XmlNode parse_xml(std::string_view bytes) {
    return detail::XmlParser(bytes).parse_document();
}

}  // namespace anno
