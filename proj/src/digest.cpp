#include "credanchor/digest.hpp"

#include <openssl/evp.h>

#include "credanchor/errors.hpp"

namespace credanchor {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;  // uppercase rejected: all text formats carry lowercase hex
}
}  // namespace

std::string to_hex(std::span<const std::uint8_t> data) {
    std::string out(data.size() * 2, '0');
    for (std::size_t i = 0; i < data.size(); ++i) {
        out[2 * i] = kHexDigits[data[i] >> 4];
        out[2 * i + 1] = kHexDigits[data[i] & 0x0f];
    }
    return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw Error("hex string has odd length");
    }
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = nibble(hex[2 * i]);
        const int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error("invalid hex character in \"" + std::string(hex) + "\"");
        }
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

Digest Digest::from_hex(std::string_view hex) {
    if (hex.size() != 64) {
        throw Error("digest must be 64 hex characters, got " + std::to_string(hex.size()));
    }
    const auto raw = credanchor::from_hex(hex);
    Digest d;
    std::copy(raw.begin(), raw.end(), d.bytes.begin());
    return d;
}

std::string Digest::hex() const {
    return to_hex(bytes);
}

Digest hash_bytes(std::span<const std::uint8_t> data) {
    Digest d;
    unsigned int len = 0;
    static const std::uint8_t kEmpty[1] = {0};
    const std::uint8_t* ptr = data.empty() ? kEmpty : data.data();
    if (EVP_Digest(ptr, data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != d.bytes.size()) {
        throw Error("SHA-256 computation failed");
    }
    return d;
}

Digest hash_bytes(std::string_view data) {
    return hash_bytes(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Digest zero_digest() {
    return Digest{};
}

}  // namespace credanchor
