#include "credanchor/merkle.hpp"

#include <cstring>

#include "credanchor/errors.hpp"

namespace credanchor {

namespace {

// Plain concatenation of the two 32-byte children, no prefix.
Digest parent_of(const Digest& left, const Digest& right) {
    std::array<std::uint8_t, 64> buf;
    std::memcpy(buf.data(), left.bytes.data(), 32);
    std::memcpy(buf.data() + 32, right.bytes.data(), 32);
    return hash_bytes(std::span<const std::uint8_t>(buf));
}

}  // namespace

std::string_view to_string(Side side) {
    return side == Side::left ? "left" : "right";
}

Side side_from_string(std::string_view text) {
    if (text == "left") return Side::left;
    if (text == "right") return Side::right;
    throw SchemaError("proof side must be \"left\" or \"right\", got \"" +
                      std::string(text) + "\"");
}

const Digest& MerkleTree::root() const {
    return levels.back().front();
}

std::size_t MerkleTree::leaf_count() const {
    return levels.front().size();
}

MerkleTree build_tree(std::span<const Digest> leaves) {
    if (leaves.empty()) {
        throw MerkleError("cannot build a tree over zero leaves");
    }
    MerkleTree tree;
    tree.levels.emplace_back(leaves.begin(), leaves.end());
    while (tree.levels.back().size() > 1) {
        const auto& below = tree.levels.back();
        std::vector<Digest> level;
        level.reserve((below.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < below.size(); i += 2) {
            level.push_back(parent_of(below[i], below[i + 1]));
        }
        if (below.size() % 2 != 0) {
            level.push_back(below.back());  // unpaired node moves up unchanged
        }
        tree.levels.push_back(std::move(level));
    }
    return tree;
}

MerkleProof generate_proof(const MerkleTree& tree, std::size_t index) {
    const std::size_t n = tree.leaf_count();
    if (index >= n) {
        throw MerkleError("leaf index " + std::to_string(index) +
                          " out of range for " + std::to_string(n) + " leaves");
    }
    MerkleProof proof{tree.levels.front()[index], {}, tree.root()};
    std::size_t i = index;
    for (std::size_t level = 0; level + 1 < tree.levels.size(); ++level) {
        const auto& nodes = tree.levels[level];
        const std::size_t sibling = i ^ 1;
        if (sibling < nodes.size()) {
            // An even position pairs with the node to its right.
            proof.path.push_back({i % 2 == 0 ? Side::right : Side::left, nodes[sibling]});
        }
        i /= 2;
    }
    return proof;
}

bool verify_proof(const MerkleProof& proof) noexcept {
    Digest current = proof.leaf;
    for (const auto& step : proof.path) {
        current = step.side == Side::right ? parent_of(current, step.sibling)
                                           : parent_of(step.sibling, current);
    }
    return current == proof.root;
}

}  // namespace credanchor
