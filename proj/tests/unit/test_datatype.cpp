// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "anno/datatype.hpp"

using anno::lexical_matches;
using anno::Primitive;
using anno::primitive_from_name;
using anno::primitive_name;

TEST_CASE("primitive name round trip") {
    for (auto p : {Primitive::Text, Primitive::Number, Primitive::Boolean, Primitive::Date,
                   Primitive::DateTime, Primitive::Time, Primitive::Url}) {
        auto back = primitive_from_name(std::string(primitive_name(p)));
        REQUIRE(back.has_value());
        CHECK(*back == p);
    }
    CHECK(primitive_name(Primitive::Url) == "URL");
    CHECK_FALSE(primitive_from_name("Integer").has_value());
}

TEST_CASE("Text accepts anything") {
    CHECK(lexical_matches(Primitive::Text, ""));
    CHECK(lexical_matches(Primitive::Text, "any bytes \xC3\xA4"));
}

TEST_CASE("Number lexical rules") {
    for (const char* ok : {"0", "5", "47.1622", "-3.5", "+12", "5.", ".5", "-0", "123456789012"})
        CHECK(lexical_matches(Primitive::Number, ok));
    for (const char* bad : {"", "abc", "1,5", "1.2.3", "1e5", " 5", "5 ", "--1", "+", "."})
        CHECK_FALSE(lexical_matches(Primitive::Number, bad));
}

TEST_CASE("Boolean lexical rules") {
    for (const char* ok : {"true", "false", "1", "0"}) CHECK(lexical_matches(Primitive::Boolean, ok));
    for (const char* bad : {"True", "FALSE", "yes", "2", ""})
        CHECK_FALSE(lexical_matches(Primitive::Boolean, bad));
}

TEST_CASE("Date lexical rules") {
    for (const char* ok : {"2017-03-17", "2017-12-31", "1999-01-01"})
        CHECK(lexical_matches(Primitive::Date, ok));
    for (const char* bad : {"2017-13-01", "2017-00-10", "2017-01-32", "2017-1-1", "17-03-17",
                            "2017/03/17", "2017-03-17T00:00:00", ""})
        CHECK_FALSE(lexical_matches(Primitive::Date, bad));
}

TEST_CASE("Time and DateTime lexical rules") {
    for (const char* ok : {"09:30:00", "23:59:59", "09:30:00.5", "09:30:00Z", "09:30:00+02:00",
                           "09:30:00-05:30"})
        CHECK(lexical_matches(Primitive::Time, ok));
    for (const char* bad : {"24:00:00", "09:60:00", "09:30", "9:30:00", "09:30:00+15:00", ""})
        CHECK_FALSE(lexical_matches(Primitive::Time, bad));
    CHECK(lexical_matches(Primitive::DateTime, "2017-03-17T09:30:00"));
    CHECK(lexical_matches(Primitive::DateTime, "2017-03-17T09:30:00Z"));
    CHECK_FALSE(lexical_matches(Primitive::DateTime, "2017-03-17 09:30:00"));
    CHECK_FALSE(lexical_matches(Primitive::DateTime, "2017-03-17"));
}

TEST_CASE("URL lexical rules") {
    for (const char* ok : {"http://schema.org", "https://x.example/a?b=c", "mailto:a@b.example",
                           "ftp+ssh://h"})
        CHECK(lexical_matches(Primitive::Url, ok));
    for (const char* bad : {"", "no-scheme", "://x", "1http://x", "http:"})
        CHECK_FALSE(lexical_matches(Primitive::Url, bad));
}
