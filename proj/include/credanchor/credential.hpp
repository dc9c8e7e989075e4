#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "credanchor/digest.hpp"
#include "credanchor/keys.hpp"

namespace credanchor {

/// A signed academic record bound to a recipient's public address. The
/// recipient address is treated as an opaque token; timestamps are integer
/// UTC seconds.
struct Credential {
    std::string id;                 // URN-style, unique within a batch
    std::string issuer_id;
    std::string recipient_address;
    std::string title;
    std::string description;
    std::int64_t issued_on = 0;
    std::optional<std::int64_t> expires;
    std::string batch_name;
    std::optional<std::string> signature;  // detached issuer signature, hex; absent before signing

    [[nodiscard]] nlohmann::json to_json() const;
    static Credential from_json(const nlohmann::json& doc);
};

/// Field invariants: non-empty id and recipient address, expires strictly
/// after issued_on. Throws CredentialError.
void validate_credential(const Credential& cred);

/// Canonical bytes of the credential without its signature field: the exact
/// message the issuer signs.
std::string signing_bytes(const Credential& cred);

/// Returns a signed copy. Signing an already-signed credential throws.
Credential sign_credential(const Credential& cred, const KeyPair& key);

bool verify_signature(const Credential& cred, std::string_view public_key_hex);

/// Hash of the canonical bytes of the *signed* credential, signature
/// included, so signature tampering shows up in the hash comparison just
/// like content tampering. This is the Merkle leaf for the batch tree.
Digest credential_hash(const Credential& cred);

Credential load_credential(const std::filesystem::path& path);
void save_credential(const Credential& cred, const std::filesystem::path& path);

}  // namespace credanchor
