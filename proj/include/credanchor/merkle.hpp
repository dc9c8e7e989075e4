#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "credanchor/digest.hpp"

namespace credanchor {

/// Which side of the running hash a proof sibling sits on.
enum class Side { left, right };

std::string_view to_string(Side side);
Side side_from_string(std::string_view text);  // strict; throws SchemaError

struct ProofStep {
    Side side;
    Digest sibling;

    bool operator==(const ProofStep&) const = default;
};

/// Audit path tying one leaf to the batch root: fold the path over the leaf
/// (concatenate the sibling on its stated side, hash, repeat) and the result
/// must equal root.
struct MerkleProof {
    Digest leaf;
    std::vector<ProofStep> path;
    Digest root;
};

/// Pairwise-hashed tree over a batch's credential hashes. Internal nodes are
/// SHA-256 over the plain concatenation of the two 32-byte children, with no
/// domain-separation prefix; an unpaired trailing node is promoted unchanged
/// to the next level. External verifiers interoperate by following the same
/// two rules.
struct MerkleTree {
    std::vector<std::vector<Digest>> levels;  // levels[0] == leaves, top has one digest

    [[nodiscard]] const Digest& root() const;
    [[nodiscard]] std::size_t leaf_count() const;
};

MerkleTree build_tree(std::span<const Digest> leaves);
MerkleProof generate_proof(const MerkleTree& tree, std::size_t index);
bool verify_proof(const MerkleProof& proof) noexcept;

}  // namespace credanchor
