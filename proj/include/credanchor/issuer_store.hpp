#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "credanchor/digest.hpp"

namespace credanchor {

struct IssuerKey {
    std::string key;  // hex public key
    std::int64_t created = 0;
    std::optional<std::int64_t> expires;
    std::optional<std::int64_t> revoked;

    /// True iff the key had been created and was neither expired nor revoked
    /// at the given instant.
    [[nodiscard]] bool valid_at(std::int64_t ts) const;
};

/// Public identity document served at /issuer/profile.json: who the issuer
/// is, which keys anchor their batches, and where the revocation list lives.
struct IssuerProfile {
    std::string issuer_id;
    std::string name;
    std::vector<IssuerKey> public_keys;
    std::string revocation_list_url;

    [[nodiscard]] nlohmann::json to_json() const;
    static IssuerProfile from_json(const nlohmann::json& doc);
};

struct Invite {
    std::string invite_id;
    std::string issuer_id;
    std::string recipient_email;   // carried as data only; no mail is sent
    std::string message;

    [[nodiscard]] nlohmann::json to_json() const;
    static Invite from_json(const nlohmann::json& doc);
};

struct IntroductionResponse {
    std::string invite_id;
    std::string recipient_address;
};

struct RevocationEntry {
    std::string target;  // credential id or batch name
    std::string reason;
    std::int64_t revoked_at = 0;
};

struct RevocationList {
    std::string issuer_id;
    std::vector<RevocationEntry> entries;

    /// True iff the credential id or its batch name appears as a target.
    [[nodiscard]] bool revokes(const std::string& credential_id,
                               const std::string& batch_name) const;
    [[nodiscard]] const RevocationEntry* entry_for(const std::string& credential_id,
                                                   const std::string& batch_name) const;

    [[nodiscard]] nlohmann::json to_json() const;
    static RevocationList from_json(const nlohmann::json& doc);
};

/// What one issuance run committed: the batch root, the anchoring
/// transaction and the member credential ids.
struct BatchRecord {
    std::string batch_name;
    Digest merkle_root;
    Digest tx_id;
    std::vector<std::string> credential_ids;
};

struct RevokeResult {
    RevocationList list;
    bool newly_added = false;  // false when the target was already revoked
};

/// Issuer-side state: one directory of JSON documents (issuer.json,
/// invites.json, bindings.json, batches.json, revocations.json) plus a
/// receipts/ subdirectory, all inspectable with a text editor. Mutations
/// write through to disk immediately; opening the directory again sees them.
class IssuerStore {
public:
    /// Creates the directory layout and the issuer document. Refuses to
    /// overwrite an existing store.
    static IssuerStore init(const std::filesystem::path& dir, std::string issuer_id,
                            std::string display_name, std::string public_key_hex,
                            std::int64_t key_created, std::string base_url);
    static IssuerStore open(const std::filesystem::path& dir);

    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }
    [[nodiscard]] const std::string& issuer_id() const { return issuer_id_; }
    [[nodiscard]] std::string profile_url() const;
    [[nodiscard]] std::string revocations_url() const;
    [[nodiscard]] IssuerProfile profile() const;
    [[nodiscard]] std::filesystem::path receipts_dir() const;

    /// Records a key lifecycle event; a verifier checking a batch anchored
    /// after `revoked_at` will no longer accept this key.
    void set_key_revoked(const std::string& public_key_hex, std::int64_t revoked_at);

    /// Points the issuer documents at a new serving location, e.g. after the
    /// service bound an ephemeral port.
    void set_base_url(std::string base_url);

    Invite create_invite(const std::string& recipient_email,
                         const std::string& message_template);
    IntroductionResponse accept_invite(const std::string& invite_id,
                                       const std::string& recipient_address);
    [[nodiscard]] std::vector<Invite> invites() const;
    [[nodiscard]] std::optional<Invite> invite(const std::string& invite_id) const;
    [[nodiscard]] std::optional<IntroductionResponse> binding(const std::string& invite_id) const;
    [[nodiscard]] std::optional<std::string> address_for_email(const std::string& email) const;

    void record_batch(const BatchRecord& batch);
    [[nodiscard]] std::optional<BatchRecord> batch(const std::string& batch_name) const;
    [[nodiscard]] bool known_credential(const std::string& credential_id) const;

    /// Appends a revocation entry. Revoking an already-revoked target is an
    /// idempotent no-op reported through `newly_added`; unknown targets throw.
    RevokeResult revoke(const std::string& target, const std::string& reason, std::int64_t at);
    [[nodiscard]] RevocationList revocations() const;

private:
    IssuerStore() = default;
    void load();
    void save_invites() const;
    void save_bindings() const;
    void save_batches() const;
    void save_revocations() const;
    void save_issuer() const;

    std::filesystem::path dir_;
    std::string issuer_id_;
    std::string name_;
    std::string base_url_;
    std::vector<IssuerKey> keys_;
    std::vector<Invite> invites_;
    std::vector<IntroductionResponse> bindings_;
    std::vector<BatchRecord> batches_;
    RevocationList revocations_;
};

}  // namespace credanchor
