// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "anno/annotation.hpp"

namespace testsupport {

// Random annotation documents for round-trip and triple-count properties.
// Not required to conform to any domain specification.
class DocGen {
public:
    explicit DocGen(std::uint64_t seed) : rng_(seed) {}

    anno::AnnotationDocument doc(int depth = 0) {
        anno::AnnotationDocument d;
        if (depth == 0 && chance(70)) d.id = identifier();
        int ntypes = 1 + pick(2);
        for (int i = 0; i < ntypes; ++i) d.types.push_back(type_name());
        int nprops = depth == 0 ? 1 + pick(8) : pick(5);
        for (int i = 0; i < nprops; ++i) {
            std::string p = property_name();
            int nvals = 1 + (chance(25) ? pick(3) : 0);
            for (int k = 0; k < nvals; ++k) d.add(p, value(depth));
        }
        return d;
    }

private:
    std::mt19937_64 rng_;

    int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
    bool chance(int pct) { return pick(100) < pct; }

    std::string type_name() {
        static const char* kTypes[] = {"Thing",  "Hotel",      "Event",  "Place",
                                       "Person", "Organization", "Offer", "Product"};
        return kTypes[pick(8)];
    }

    std::string property_name() {
        static const char* kProps[] = {"name",   "description", "url",      "telephone",
                                       "email",  "startDate",   "location", "address",
                                       "price",  "makesOffer",  "image",    "performer"};
        return kProps[pick(12)];
    }

    std::string identifier() {
        std::string s = "id-";
        for (int i = 0; i < 8; ++i) s += "0123456789abcdef"[pick(16)];
        return s;
    }

    std::string text() {
        static const char* kWords[] = {"Alpen",  "Hotel",  "Zillertal", "Fr\xC3\xBChst\xC3\xBC"
                                                                        "ck",
                                       "Spa",    "Berg",   "Tal",       "See",
                                       "M\xC3\xBCnchen", "\"quoted\"", "a<b&c", " padded "};
        std::string s = kWords[pick(12)];
        if (chance(40)) {
            s += ' ';
            s += kWords[pick(12)];
        }
        return s;
    }

    anno::Value value(int depth) {
        int r = pick(depth < 4 ? 10 : 8);
        switch (r) {
            case 0: return anno::Literal(static_cast<std::int64_t>(rng_() % 2000000) - 1000000);
            case 1: {
                double d = static_cast<double>(static_cast<std::int64_t>(rng_() % 1000000)) / 64.0;
                return anno::Literal(d);
            }
            case 2: return anno::Literal(chance(50));
            case 3: return anno::LangLiteral{text(), chance(50) ? "de" : "en-US"};
            case 8:
            case 9: return anno::Entity(doc(depth + 1));
            default: return anno::Literal(text());
        }
    }
};

}  // namespace testsupport
