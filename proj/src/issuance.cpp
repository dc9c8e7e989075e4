#include "credanchor/issuance.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "credanchor/canonical.hpp"
#include "credanchor/errors.hpp"

namespace credanchor {

nlohmann::json MerkleReceipt::to_json() const {
    nlohmann::json path = nlohmann::json::array();
    for (const auto& step : proof.path) {
        path.push_back({{"side", std::string(to_string(step.side))},
                        {"hash", step.sibling.hex()}});
    }
    return nlohmann::json{
        {"credential", credential.to_json()},
        {"target_hash", target_hash.hex()},
        {"proof", std::move(path)},
        {"merkle_root", merkle_root.hex()},
        {"tx_id", tx_id.hex()},
        {"issuer_profile_url", issuer_profile_url},
    };
}

MerkleReceipt MerkleReceipt::from_json(const nlohmann::json& doc) {
    MerkleReceipt r;
    try {
        r.credential = Credential::from_json(doc.at("credential"));
        r.target_hash = Digest::from_hex(doc.at("target_hash").get<std::string>());
        r.merkle_root = Digest::from_hex(doc.at("merkle_root").get<std::string>());
        r.tx_id = Digest::from_hex(doc.at("tx_id").get<std::string>());
        r.issuer_profile_url = doc.at("issuer_profile_url").get<std::string>();
        r.proof.leaf = r.target_hash;
        r.proof.root = r.merkle_root;
        for (const auto& step : doc.at("proof")) {
            r.proof.path.push_back(
                {side_from_string(step.at("side").get<std::string>()),
                 Digest::from_hex(step.at("hash").get<std::string>())});
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("receipt: ") + e.what());
    } catch (const Error& e) {
        if (dynamic_cast<const SchemaError*>(&e)) throw;
        throw SchemaError(std::string("receipt: ") + e.what());
    }
    return r;
}

MerkleReceipt load_receipt(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read receipt file " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return MerkleReceipt::from_json(parse_json(text));
}

void save_receipt(const MerkleReceipt& receipt, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write receipt file " + path.string());
    }
    out << canonicalize(receipt.to_json()) << '\n';
}

std::vector<MerkleReceipt> issue_batch(IssuerStore& store,
                                       std::vector<Credential> credentials,
                                       const KeyPair& key,
                                       const std::string& batch_name,
                                       ChainClient& chain) {
    if (credentials.empty()) {
        throw IssuanceError("batch \"" + batch_name + "\" is empty");
    }
    if (batch_name.empty()) {
        throw IssuanceError("batch name is empty");
    }
    const auto profile = store.profile();
    const bool known_key =
        std::any_of(profile.public_keys.begin(), profile.public_keys.end(),
                    [&](const IssuerKey& k) { return k.key == key.public_key; });
    if (!known_key) {
        throw IssuanceError("signing key " + key.public_key +
                            " is not listed in the issuer profile");
    }

    std::set<std::string> ids;
    for (auto& cred : credentials) {
        if (cred.signature) {
            throw IssuanceError("credential " + cred.id + " is already signed");
        }
        cred.batch_name = batch_name;
        validate_credential(cred);
        if (cred.id.find('/') != std::string::npos) {
            throw IssuanceError("credential id " + cred.id +
                                " contains '/', which receipt filenames cannot carry");
        }
        if (!ids.insert(cred.id).second) {
            throw IssuanceError("duplicate credential id in batch: " + cred.id);
        }
    }

    // Leaves are ordered by credential id so the same credential set always
    // reproduces the same root, whatever order the files arrived in.
    std::sort(credentials.begin(), credentials.end(),
              [](const Credential& a, const Credential& b) { return a.id < b.id; });

    std::vector<Credential> signed_creds;
    std::vector<Digest> leaves;
    signed_creds.reserve(credentials.size());
    leaves.reserve(credentials.size());
    for (const auto& cred : credentials) {
        signed_creds.push_back(sign_credential(cred, key));
        leaves.push_back(credential_hash(signed_creds.back()));
    }

    const auto tree = build_tree(leaves);

    // The one side effect that can fail comes first; nothing has been
    // persisted yet, so a submission error leaves no trace.
    const Digest tx_id = chain.submit_anchor(tree.root(), key.public_key);

    std::vector<MerkleReceipt> receipts;
    receipts.reserve(signed_creds.size());
    for (std::size_t i = 0; i < signed_creds.size(); ++i) {
        receipts.push_back(MerkleReceipt{signed_creds[i], leaves[i],
                                         generate_proof(tree, i), tree.root(), tx_id,
                                         store.profile_url()});
    }

    BatchRecord record{batch_name, tree.root(), tx_id, {}};
    for (const auto& cred : signed_creds) record.credential_ids.push_back(cred.id);
    store.record_batch(record);
    for (const auto& receipt : receipts) {
        save_receipt(receipt,
                     store.receipts_dir() / (receipt.credential.id + ".receipt.json"));
    }
    return receipts;
}

}  // namespace credanchor
