#pragma once

#include <string>
#include <string_view>

namespace credanchor {

/// Ed25519 key pair, hex encoded. Signing is deterministic: the same message
/// under the same key always yields the same signature bytes, which keeps
/// signed-credential hashes reproducible across parties.
struct KeyPair {
    std::string public_key;   // 32 bytes, lowercase hex
    std::string private_key;  // 64 bytes, lowercase hex; never serialized into credentials or receipts

    static KeyPair generate();
    static KeyPair from_seed(std::string_view seed_hex);
    static KeyPair from_private(std::string_view private_key_hex);
};

/// Detached signature over the message, returned as lowercase hex.
std::string sign_detached(std::string_view message, const KeyPair& key);

/// True iff the signature verifies under the public key. Undecodable
/// signatures raise MalformedSignature instead of returning false.
bool verify_detached(std::string_view message, std::string_view signature_hex,
                     std::string_view public_key_hex);

}  // namespace credanchor
