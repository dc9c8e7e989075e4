#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <vector>

#include "credanchor/chain.hpp"

namespace credanchor {

/// In-process chain with explicit mining and an append-only JSON-lines
/// journal (one `tx` or `block` record per line). State is rebuilt by
/// replaying the journal on open, which re-checks every transaction id,
/// block hash and prev-hash link, so a reload doubles as an integrity audit.
///
/// There are no reorgs, forks or mempool eviction; mining is an explicit
/// call so tests control time.
class SimulatedChain final : public ChainClient {
public:
    explicit SimulatedChain(std::filesystem::path store_path, std::int64_t fee_rate = 1);

    Digest submit_anchor(const Digest& root, const std::string& issuer_address) override;
    std::optional<ChainTransaction> get_transaction(const Digest& tx_id) const override;
    int confirmations(const Digest& tx_id) const override;
    std::int64_t fee_rate() const override;

    /// Confirms every pending transaction at the new height. The timestamp
    /// must be strictly greater than the previous block's.
    Block mine_block(std::int64_t timestamp);

    [[nodiscard]] std::vector<Block> blocks() const;
    [[nodiscard]] std::vector<ChainTransaction> transactions() const;  // submission order
    [[nodiscard]] std::size_t pending_count() const;
    [[nodiscard]] const std::filesystem::path& store_path() const { return path_; }

private:
    void replay();
    void append_record(nlohmann::json record, std::string_view kind);

    std::filesystem::path path_;
    std::int64_t fee_rate_;

    mutable std::mutex mu_;
    std::vector<Digest> order_;
    std::map<Digest, ChainTransaction> txs_;
    std::vector<Digest> pending_;
    std::vector<Block> blocks_;
};

}  // namespace credanchor
