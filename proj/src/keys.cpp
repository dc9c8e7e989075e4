#include "credanchor/keys.hpp"

#include <sodium.h>

#include "credanchor/digest.hpp"
#include "credanchor/errors.hpp"

namespace credanchor {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();  // idempotent, thread-safe
    if (rc < 0) {
        throw Error("libsodium initialization failed");
    }
}

std::vector<std::uint8_t> decode_key(std::string_view hex, std::size_t expected,
                                     const char* what) {
    std::vector<std::uint8_t> raw;
    try {
        raw = from_hex(hex);
    } catch (const Error& e) {
        throw Error(std::string(what) + ": " + e.what());
    }
    if (raw.size() != expected) {
        throw Error(std::string(what) + " must be " + std::to_string(expected) +
                    " bytes, got " + std::to_string(raw.size()));
    }
    return raw;
}

}  // namespace

KeyPair KeyPair::generate() {
    ensure_sodium();
    unsigned char pk[crypto_sign_PUBLICKEYBYTES];
    unsigned char sk[crypto_sign_SECRETKEYBYTES];
    crypto_sign_keypair(pk, sk);
    KeyPair kp{to_hex({pk, sizeof pk}), to_hex({sk, sizeof sk})};
    sodium_memzero(sk, sizeof sk);
    return kp;
}

KeyPair KeyPair::from_seed(std::string_view seed_hex) {
    ensure_sodium();
    const auto seed = decode_key(seed_hex, crypto_sign_SEEDBYTES, "key seed");
    unsigned char pk[crypto_sign_PUBLICKEYBYTES];
    unsigned char sk[crypto_sign_SECRETKEYBYTES];
    crypto_sign_seed_keypair(pk, sk, seed.data());
    KeyPair kp{to_hex({pk, sizeof pk}), to_hex({sk, sizeof sk})};
    sodium_memzero(sk, sizeof sk);
    return kp;
}

KeyPair KeyPair::from_private(std::string_view private_key_hex) {
    ensure_sodium();
    const auto sk = decode_key(private_key_hex, crypto_sign_SECRETKEYBYTES, "private key");
    unsigned char pk[crypto_sign_PUBLICKEYBYTES];
    if (crypto_sign_ed25519_sk_to_pk(pk, sk.data()) != 0) {
        throw Error("could not derive public key from private key");
    }
    return KeyPair{to_hex({pk, sizeof pk}), std::string(private_key_hex)};
}

std::string sign_detached(std::string_view message, const KeyPair& key) {
    ensure_sodium();
    const auto sk = decode_key(key.private_key, crypto_sign_SECRETKEYBYTES, "private key");
    unsigned char sig[crypto_sign_BYTES];
    crypto_sign_detached(sig, nullptr,
                         reinterpret_cast<const unsigned char*>(message.data()),
                         message.size(), sk.data());
    return to_hex({sig, sizeof sig});
}

bool verify_detached(std::string_view message, std::string_view signature_hex,
                     std::string_view public_key_hex) {
    ensure_sodium();
    std::vector<std::uint8_t> sig;
    try {
        sig = from_hex(signature_hex);
    } catch (const Error& e) {
        throw MalformedSignature(std::string("signature is not decodable: ") + e.what());
    }
    if (sig.size() != crypto_sign_BYTES) {
        throw MalformedSignature("signature must be " + std::to_string(crypto_sign_BYTES) +
                                 " bytes, got " + std::to_string(sig.size()));
    }
    const auto pk = decode_key(public_key_hex, crypto_sign_PUBLICKEYBYTES, "public key");
    return crypto_sign_verify_detached(sig.data(),
                                       reinterpret_cast<const unsigned char*>(message.data()),
                                       message.size(), pk.data()) == 0;
}

}  // namespace credanchor
