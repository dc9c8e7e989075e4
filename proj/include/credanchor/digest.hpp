#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace credanchor {

/// A 32-byte SHA-256 value. Rendered as 64 lowercase hex characters in
/// every text format.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    static Digest from_hex(std::string_view hex);
    [[nodiscard]] std::string hex() const;

    auto operator<=>(const Digest&) const = default;
};

[[nodiscard]] Digest hash_bytes(std::span<const std::uint8_t> data);
[[nodiscard]] Digest hash_bytes(std::string_view data);

/// All-zero digest, used as the genesis block back-reference.
[[nodiscard]] Digest zero_digest();

std::string to_hex(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> from_hex(std::string_view hex);

}  // namespace credanchor
