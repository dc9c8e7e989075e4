#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "credanchor/digest.hpp"

namespace credanchor {

/// An anchoring transaction. The anchor payload is one 32-byte slot, so what
/// lands on chain stays the same size no matter how many credentials the
/// batch holds.
struct ChainTransaction {
    Digest tx_id;             // hash of the canonical serialization below block data
    Digest anchor_payload;    // the batch Merkle root
    std::string issuer_address;
    std::string nonce;        // 16 random bytes, hex; repeated anchors get distinct ids
    std::int64_t size_bytes = 0;
    std::int64_t fee_paid = 0;
    std::optional<std::int64_t> block_height;  // absent while unconfirmed
    std::optional<std::int64_t> timestamp;     // set when mined

    [[nodiscard]] nlohmann::json to_json() const;
    static ChainTransaction from_json(const nlohmann::json& doc);
};

struct Block {
    std::int64_t height = 0;
    Digest prev_hash;         // all-zero digest at height 0
    std::vector<Digest> tx_ids;
    std::int64_t timestamp = 0;
    Digest block_hash;

    [[nodiscard]] nlohmann::json to_json() const;
    static Block from_json(const nlohmann::json& doc);
};

/// Backend seam. Issuers and verifiers only ever touch a chain through this
/// interface, so a real chain client can replace the simulator without
/// touching them. Implementations must be safe to share across threads.
class ChainClient {
public:
    virtual ~ChainClient() = default;

    /// Submits an anchor transaction to the pending pool and returns its id.
    /// The fee is charged at the rate in force at submission.
    virtual Digest submit_anchor(const Digest& root, const std::string& issuer_address) = 0;

    virtual std::optional<ChainTransaction> get_transaction(const Digest& tx_id) const = 0;

    /// 1 when the transaction sits in the tip block; 0 while unconfirmed.
    /// Throws TxNotFound for unknown ids.
    virtual int confirmations(const Digest& tx_id) const = 0;

    /// Fee units charged per serialized byte.
    virtual std::int64_t fee_rate() const = 0;
};

/// Anchor payload of a confirmed transaction. Throws TxNotFound or
/// TxUnconfirmed so callers can report "awaiting confirmation" distinctly.
Digest remote_root(const ChainClient& client, const Digest& tx_id);

constexpr std::int64_t fee_for(std::int64_t size_bytes, std::int64_t fee_rate) {
    return size_bytes * fee_rate;
}

}  // namespace credanchor
