#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"

#include "credanchor/canonical.hpp"
#include "credanchor/digest.hpp"
#include "credanchor/errors.hpp"

using namespace credanchor;

namespace {

// Random document in the supported value domain, for property checks.
nlohmann::json random_doc(std::mt19937_64& rng, int depth = 0) {
    std::uniform_int_distribution<int> pick(0, depth >= 3 ? 2 : 4);
    switch (pick(rng)) {
        case 0:
            return static_cast<std::int64_t>(rng()) >> (rng() % 40);
        case 1:
            return (rng() % 2) == 0;
        case 2:
            return "s" + std::to_string(rng() % 100000);
        case 3: {
            nlohmann::json arr = nlohmann::json::array();
            for (std::uint64_t i = 0, n = rng() % 4; i < n; ++i) {
                arr.push_back(random_doc(rng, depth + 1));
            }
            return arr;
        }
        default: {
            nlohmann::json obj = nlohmann::json::object();
            for (std::uint64_t i = 0, n = rng() % 4; i < n; ++i) {
                obj["k" + std::to_string(rng() % 50)] = random_doc(rng, depth + 1);
            }
            return obj;
        }
    }
}

}  // namespace

TEST_CASE("canonicalize is independent of key order") {
    const auto a = parse_json(R"({"b":1,"a":2})");
    const auto b = parse_json(R"({"a":2,"b":1})");
    CHECK(canonicalize(a) == canonicalize(b));
    CHECK(canonicalize(a) == R"({"a":2,"b":1})");
}

TEST_CASE("canonicalize of the empty document") {
    CHECK(canonicalize(nlohmann::json::object()) == "{}");
}

TEST_CASE("canonicalize matches an independent canonical-JSON encoder") {
    // Expected bytes and digest were produced beforehand with a second
    // canonical-JSON implementation (sorted keys, no whitespace, raw UTF-8).
    const auto doc = parse_json(
        "{\"z\":[1,2,{\"b\":false,\"a\":\"tw\\\"o\\n\"}],"
        "\"a\":{\"nested\":{\"deep\":[true,\"caf\\u00e9\",0],\"k\":-17}},"
        "\"num\":1234567890123}");
    const std::string expected =
        "{\"a\":{\"nested\":{\"deep\":[true,\"café\",0],\"k\":-17}},"
        "\"num\":1234567890123,"
        "\"z\":[1,2,{\"a\":\"tw\\\"o\\n\",\"b\":false}]}";
    const auto bytes = canonicalize(doc);
    CHECK(bytes == expected);
    CHECK(bytes.size() == 106);
    CHECK(hash_bytes(bytes).hex() ==
          "ca8160d99d679f0f1a9091a69f3bfc3462b3150990a37a9c69463d4b3ef7bd80");
}

TEST_CASE("canonicalize rejects unsupported values") {
    CHECK_THROWS_AS(canonicalize(parse_json(R"({"a":1.5})")), CanonicalError);
    CHECK_THROWS_AS(canonicalize(parse_json(R"({"a":1e5})")), CanonicalError);
    CHECK_THROWS_AS(canonicalize(parse_json(R"({"a":null})")), CanonicalError);
    CHECK_THROWS_AS(canonicalize(parse_json(R"([{"deep":[1,{"x":2.25}]}])")), CanonicalError);
    CHECK_THROWS_AS(parse_json("{not json"), CanonicalError);
}

TEST_CASE("canonicalize integers use shortest decimal form") {
    CHECK(canonicalize(parse_json(R"({"n":-17})")) == R"({"n":-17})");
    CHECK(canonicalize(parse_json(R"({"n":0})")) == R"({"n":0})");
    CHECK(canonicalize(parse_json("{\"n\":9223372036854775807}")) ==
          "{\"n\":9223372036854775807}");
}

TEST_CASE("canonicalize is idempotent through parse") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
        const auto doc = random_doc(rng);
        const auto bytes = canonicalize(doc);
        CHECK(canonicalize(parse_json(bytes)) == bytes);
    }
}

TEST_CASE("canonicalize is constant over key insertion order") {
    std::vector<std::pair<std::string, nlohmann::json>> fields = {
        {"id", "urn:x:1"}, {"count", 7}, {"flag", true},
        {"list", nlohmann::json::array({1, 2, 3})}, {"name", "café"},
    };
    std::mt19937_64 rng(7);
    std::string first;
    for (int i = 0; i < 200; ++i) {
        std::shuffle(fields.begin(), fields.end(), rng);
        nlohmann::json doc = nlohmann::json::object();
        for (const auto& [k, v] : fields) doc[k] = v;
        const auto bytes = canonicalize(doc);
        if (first.empty()) first = bytes;
        CHECK(bytes == first);
    }
}
