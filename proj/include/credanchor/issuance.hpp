#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "credanchor/chain.hpp"
#include "credanchor/credential.hpp"
#include "credanchor/issuer_store.hpp"
#include "credanchor/merkle.hpp"

namespace credanchor {

/// The self-contained file a recipient holds and shares on their own terms:
/// the signed credential, its hash, the audit path to the batch root, and
/// the transaction that root is anchored in. Verifying one needs chain
/// access and the issuer's public documents, never the issuer's cooperation.
struct MerkleReceipt {
    Credential credential;
    Digest target_hash;   // == credential_hash(credential)
    MerkleProof proof;    // leaf == target_hash, root == merkle_root
    Digest merkle_root;
    Digest tx_id;
    std::string issuer_profile_url;

    [[nodiscard]] nlohmann::json to_json() const;
    static MerkleReceipt from_json(const nlohmann::json& doc);
};

MerkleReceipt load_receipt(const std::filesystem::path& path);
void save_receipt(const MerkleReceipt& receipt, const std::filesystem::path& path);

/// Signs every credential with `key`, builds one tree over the credential
/// hashes in credential-id order, anchors the root in exactly one chain
/// transaction and returns one receipt per credential in leaf order.
///
/// All-or-nothing: if anything fails (duplicate ids, empty batch, chain
/// submission) no receipts are emitted and the store is left untouched.
std::vector<MerkleReceipt> issue_batch(IssuerStore& store,
                                       std::vector<Credential> credentials,
                                       const KeyPair& key,
                                       const std::string& batch_name,
                                       ChainClient& chain);

}  // namespace credanchor
