#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "credanchor/chain_sim.hpp"
#include "credanchor/credential.hpp"
#include "credanchor/issuance.hpp"
#include "credanchor/issuer_store.hpp"
#include "credanchor/keys.hpp"

namespace credanchor::test {

// Deterministic fixture keypair; the same seed is used by the out-of-band
// oracle that froze the expected signature and hash values.
inline const char* kSeedHex =
    "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";

inline KeyPair fixture_key() {
    return KeyPair::from_seed(kSeedHex);
}

constexpr std::int64_t kKeyCreated = 1500000000;
constexpr std::int64_t kIssuedOn = 1557705600;
constexpr std::int64_t kMineTime = 1557800000;
constexpr std::int64_t kVerifyTime = 1700000000;

struct TempDir {
    std::filesystem::path path;

    TempDir() {
        auto base = std::filesystem::temp_directory_path() / "credanchor-test-XXXXXX";
        std::string tmpl = base.string();
        if (mkdtemp(tmpl.data()) == nullptr) {
            throw std::runtime_error("mkdtemp failed");
        }
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline Credential make_credential(int n, const std::string& batch = "class-of-2019") {
    Credential c;
    c.id = "urn:credential:test:" + std::to_string(1000 + n);
    c.issuer_id = "urn:issuer:test:registrar";
    c.recipient_address = "addr" + std::to_string(n) + "feedfacecafe";
    c.title = "Master of Science " + std::to_string(n);
    c.description = "Course completion record number " + std::to_string(n);
    c.issued_on = kIssuedOn;
    c.batch_name = batch;
    return c;
}

inline std::vector<Credential> make_batch(int n, const std::string& batch = "class-of-2019") {
    std::vector<Credential> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(make_credential(i, batch));
    return out;
}

inline IssuerStore make_store(const std::filesystem::path& dir, const KeyPair& key,
                              const std::string& base_url = "http://127.0.0.1:1") {
    return IssuerStore::init(dir, "urn:issuer:test:registrar", "Test Registrar",
                             key.public_key, kKeyCreated, base_url);
}

inline Digest random_digest(std::mt19937_64& rng) {
    Digest d;
    for (auto& b : d.bytes) b = static_cast<std::uint8_t>(rng());
    return d;
}

}  // namespace credanchor::test
