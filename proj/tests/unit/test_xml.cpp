// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "anno/xml.hpp"

using anno::Error;
using anno::ErrorKind;
using anno::parse_xml;
using anno::XmlNode;

namespace {

const XmlNode& only_element(const XmlNode& n) {
    const XmlNode* found = nullptr;
    for (const auto& c : n.children)
        if (c.is_element()) {
            REQUIRE(found == nullptr);
            found = &c;
        }
    REQUIRE(found != nullptr);
    return *found;
}

ErrorKind kind_of(const std::string& xml) {
    try {
        parse_xml(xml);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected a parse failure");
    return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("element tree with attributes and text") {
    XmlNode root = parse_xml("<a x=\"1\" y=\"two\"><b>hi</b><b>ho</b></a>");
    CHECK(root.name == "a");
    REQUIRE(root.attributes.size() == 2);
    CHECK(*root.attribute("x") == "1");
    CHECK(*root.attribute("y") == "two");
    CHECK(root.attribute("z") == nullptr);
    REQUIRE(root.children.size() == 2);
    CHECK(root.children[0].name == "b");
    CHECK(root.children[0].direct_text() == "hi");
    CHECK(root.children[1].direct_text() == "ho");
}

TEST_CASE("prolog, BOM, comments and processing instructions are skipped") {
    std::string xml = "\xEF\xBB\xBF<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                      "<!-- top --><?pi data?><root><!-- in -->text</root><!-- after -->";
    XmlNode root = parse_xml(xml);
    CHECK(root.name == "root");
    CHECK(root.direct_text() == "text");
}

TEST_CASE("built-in and numeric entities") {
    XmlNode root = parse_xml("<t a=\"x&amp;y\">&lt;&gt;&quot;&apos;&amp; &#8364; &#x20AC;</t>");
    CHECK(*root.attribute("a") == "x&y");
    CHECK(root.direct_text() == "<>\"'& \xE2\x82\xAC \xE2\x82\xAC");
}

TEST_CASE("CDATA keeps markup verbatim") {
    XmlNode root = parse_xml("<t><![CDATA[a<b&c]]></t>");
    CHECK(root.direct_text() == "a<b&c");
}

TEST_CASE("self-closing and empty elements") {
    XmlNode root = parse_xml("<r><a/><b></b></r>");
    REQUIRE(root.children.size() == 2);
    CHECK(root.children[0].name == "a");
    CHECK(root.children[0].children.empty());
    CHECK(root.children[1].direct_text().empty());
}

TEST_CASE("direct_text trims and concatenates only direct text children") {
    XmlNode root = parse_xml("<r>  ab <x>inner</x> cd  </r>");
    CHECK(root.direct_text() == "ab  cd");
    CHECK(only_element(root).direct_text() == "inner");
}

TEST_CASE("harmless doctype is skipped") {
    XmlNode root = parse_xml("<!DOCTYPE r><r/>");
    CHECK(root.name == "r");
}

TEST_CASE("external and internal entity declarations are rejected") {
    CHECK(kind_of("<!DOCTYPE r SYSTEM \"http://x/d.dtd\"><r/>") == ErrorKind::ExternalEntity);
    CHECK(kind_of("<!DOCTYPE r PUBLIC \"-//X//EN\" \"d.dtd\"><r/>") == ErrorKind::ExternalEntity);
    CHECK(kind_of("<!DOCTYPE r [<!ENTITY e \"v\">]><r>&e;</r>") == ErrorKind::ExternalEntity);
}

TEST_CASE("malformed documents fail with Parse") {
    CHECK(kind_of("") == ErrorKind::Parse);
    CHECK(kind_of("plain") == ErrorKind::Parse);
    CHECK(kind_of("<a>") == ErrorKind::Parse);
    CHECK(kind_of("<a></b>") == ErrorKind::Parse);
    CHECK(kind_of("<a x=\"1\" x=\"2\"/>") == ErrorKind::Parse);
    CHECK(kind_of("<a>&unknown;</a>") == ErrorKind::Parse);
    CHECK(kind_of("<a><b></a></b>") == ErrorKind::Parse);
    CHECK(kind_of("<a/><b/>") == ErrorKind::Parse);
}

TEST_CASE("only UTF-8 encodings are accepted") {
    CHECK_NOTHROW(parse_xml("<?xml version=\"1.0\" encoding=\"utf-8\"?><r/>"));
    CHECK(kind_of("<?xml version=\"1.0\" encoding=\"UTF-16\"?><r/>") == ErrorKind::Parse);
}

TEST_CASE("errors carry line and column") {
    try {
        parse_xml("<a>\n  <b>\n  </c>\n</a>");
        FAIL("expected failure");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("</c>") != std::string::npos);
    }
}

TEST_CASE("nesting depth is bounded") {
    std::string deep, close;
    for (int i = 0; i < 300; ++i) {
        deep += "<d>";
        close += "</d>";
    }
    CHECK(kind_of(deep + close) == ErrorKind::Parse);
    std::string ok, okc;
    for (int i = 0; i < 150; ++i) {
        ok += "<d>";
        okc += "</d>";
    }
    CHECK_NOTHROW(parse_xml(ok + okc));
}

TEST_CASE("attribute values accept both quote styles") {
    XmlNode root = parse_xml("<r a='sq \"x\"' b=\"dq 'y'\"/>");
    CHECK(*root.attribute("a") == "sq \"x\"");
    CHECK(*root.attribute("b") == "dq 'y'");
}
