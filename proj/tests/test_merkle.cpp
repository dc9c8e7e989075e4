#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "credanchor/errors.hpp"
#include "credanchor/merkle.hpp"
#include "support.hpp"

using namespace credanchor;
using namespace credanchor::test;

namespace {

// Independent oracle: recursive pairwise reduction with its own hashing,
// sharing no code with build_tree.
Digest oracle_concat_hash(const Digest& a, const Digest& b) {
    std::vector<std::uint8_t> buf(a.bytes.begin(), a.bytes.end());
    buf.insert(buf.end(), b.bytes.begin(), b.bytes.end());
    Digest out;
    unsigned int len = 0;
    REQUIRE(EVP_Digest(buf.data(), buf.size(), out.bytes.data(), &len, EVP_sha256(),
                       nullptr) == 1);
    return out;
}

Digest oracle_root(std::vector<Digest> nodes) {
    REQUIRE(!nodes.empty());
    if (nodes.size() == 1) return nodes.front();
    std::vector<Digest> up;
    for (std::size_t i = 0; i < nodes.size(); i += 2) {
        up.push_back(i + 1 < nodes.size() ? oracle_concat_hash(nodes[i], nodes[i + 1])
                                          : nodes[i]);
    }
    return oracle_root(std::move(up));
}

std::vector<Digest> random_leaves(std::size_t n, std::mt19937_64& rng) {
    std::vector<Digest> leaves;
    leaves.reserve(n);
    for (std::size_t i = 0; i < n; ++i) leaves.push_back(random_digest(rng));
    return leaves;
}

}  // namespace

TEST_CASE("single leaf promotes to the root") {
    std::mt19937_64 rng(1);
    const auto leaf = random_digest(rng);
    const auto tree = build_tree(std::vector<Digest>{leaf});
    CHECK(tree.root() == leaf);
    const auto proof = generate_proof(tree, 0);
    CHECK(proof.path.empty());
    CHECK(proof.root == leaf);
    CHECK(verify_proof(proof));
}

TEST_CASE("two leaves hash pairwise") {
    std::mt19937_64 rng(2);
    const auto a = random_digest(rng);
    const auto b = random_digest(rng);
    const auto tree = build_tree(std::vector<Digest>{a, b});
    CHECK(tree.root() == oracle_concat_hash(a, b));

    const auto proof = generate_proof(tree, 0);
    REQUIRE(proof.path.size() == 1);
    CHECK(proof.path[0].side == Side::right);
    CHECK(proof.path[0].sibling == b);
}

TEST_CASE("empty leaf list is rejected") {
    CHECK_THROWS_AS(build_tree(std::vector<Digest>{}), MerkleError);
}

TEST_CASE("proof index out of range is rejected") {
    std::mt19937_64 rng(3);
    const auto tree = build_tree(random_leaves(3, rng));
    CHECK_THROWS_AS(generate_proof(tree, 3), MerkleError);
}

TEST_CASE("five-leaf root equals the recursive oracle") {
    std::mt19937_64 rng(4);
    const auto leaves = random_leaves(5, rng);
    CHECK(build_tree(leaves).root() == oracle_root(leaves));
}

TEST_CASE("roots match the oracle and all proofs verify for sizes 1..16") {
    std::mt19937_64 rng(5);
    for (std::size_t n = 1; n <= 16; ++n) {
        const auto leaves = random_leaves(n, rng);
        const auto tree = build_tree(leaves);
        CHECK(tree.root() == oracle_root(leaves));
        CHECK(tree.leaf_count() == n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto proof = generate_proof(tree, i);
            CHECK(proof.leaf == leaves[i]);
            CHECK(proof.root == tree.root());
            CHECK(proof.path.size() <=
                  static_cast<std::size_t>(std::ceil(std::log2(std::max<std::size_t>(n, 2)))));
            CHECK(verify_proof(proof));
        }
    }
}

TEST_CASE("no single-element mutation of a valid proof verifies, sizes 1..16") {
    std::mt19937_64 rng(6);
    for (std::size_t n = 1; n <= 16; ++n) {
        const auto leaves = random_leaves(n, rng);
        const auto tree = build_tree(leaves);
        for (std::size_t i = 0; i < n; ++i) {
            const auto proof = generate_proof(tree, i);

            auto leaf_mut = proof;
            leaf_mut.leaf.bytes[0] ^= 0x01;
            CHECK_FALSE(verify_proof(leaf_mut));

            auto root_mut = proof;
            root_mut.root.bytes[31] ^= 0x80;
            CHECK_FALSE(verify_proof(root_mut));

            for (std::size_t k = 0; k < proof.path.size(); ++k) {
                auto sib_mut = proof;
                sib_mut.path[k].sibling.bytes[k % 32] ^= 0xff;
                CHECK_FALSE(verify_proof(sib_mut));

                auto side_mut = proof;
                side_mut.path[k].side =
                    side_mut.path[k].side == Side::left ? Side::right : Side::left;
                CHECK_FALSE(verify_proof(side_mut));

                auto random_sib = proof;
                random_sib.path[k].sibling = random_digest(rng);
                CHECK_FALSE(verify_proof(random_sib));
            }
        }
    }
}

TEST_CASE("levels shrink by ceil-halving and odd nodes are promoted unchanged") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {3u, 5u, 7u, 11u, 13u}) {
        const auto leaves = random_leaves(n, rng);
        const auto tree = build_tree(leaves);
        CHECK(tree.levels.front() == leaves);
        CHECK(tree.levels.back().size() == 1);
        for (std::size_t k = 0; k + 1 < tree.levels.size(); ++k) {
            const auto& below = tree.levels[k];
            const auto& above = tree.levels[k + 1];
            CHECK(above.size() == (below.size() + 1) / 2);
            if (below.size() % 2 != 0) {
                CHECK(above.back() == below.back());
            }
        }
    }
}

TEST_CASE("root is deterministic for fixed order and changes under permutation") {
    std::mt19937_64 rng(8);
    const auto leaves = random_leaves(8, rng);
    CHECK(build_tree(leaves).root() == build_tree(leaves).root());

    for (int i = 0; i < 20; ++i) {
        auto shuffled = leaves;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        if (shuffled == leaves) continue;
        CHECK(build_tree(shuffled).root() != build_tree(leaves).root());
    }
}

TEST_CASE("side tags parse strictly") {
    CHECK(side_from_string("left") == Side::left);
    CHECK(side_from_string("right") == Side::right);
    CHECK(to_string(Side::left) == "left");
    CHECK_THROWS_AS(side_from_string("up"), SchemaError);
    CHECK_THROWS_AS(side_from_string("Left"), SchemaError);
}
