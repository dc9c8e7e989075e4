#include "credanchor/chain_sim.hpp"

#include <sodium.h>

#include <fstream>
#include <limits>

#include "credanchor/canonical.hpp"
#include "credanchor/errors.hpp"

namespace credanchor {

namespace {

nlohmann::json tx_body(const Digest& anchor, const std::string& issuer_address,
                       const std::string& nonce) {
    return nlohmann::json{
        {"anchor_payload", anchor.hex()},
        {"issuer_address", issuer_address},
        {"nonce", nonce},
    };
}

// The id covers everything except block placement, so mining never changes
// what the id commits to.
Digest compute_tx_id(const ChainTransaction& tx) {
    auto doc = tx_body(tx.anchor_payload, tx.issuer_address, tx.nonce);
    doc["size_bytes"] = tx.size_bytes;
    doc["fee_paid"] = tx.fee_paid;
    return hash_bytes(canonicalize(doc));
}

nlohmann::json block_body(const Block& b) {
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& id : b.tx_ids) ids.push_back(id.hex());
    return nlohmann::json{
        {"height", b.height},
        {"prev_hash", b.prev_hash.hex()},
        {"tx_ids", std::move(ids)},
        {"timestamp", b.timestamp},
    };
}

Digest compute_block_hash(const Block& b) {
    return hash_bytes(canonicalize(block_body(b)));
}

std::string random_nonce() {
    if (sodium_init() < 0) {
        throw Error("libsodium initialization failed");
    }
    std::uint8_t raw[16];
    randombytes_buf(raw, sizeof raw);
    return to_hex({raw, sizeof raw});
}

}  // namespace

nlohmann::json ChainTransaction::to_json() const {
    auto j = tx_body(anchor_payload, issuer_address, nonce);
    j["tx_id"] = tx_id.hex();
    j["size_bytes"] = size_bytes;
    j["fee_paid"] = fee_paid;
    if (block_height) j["block_height"] = *block_height;
    if (timestamp) j["timestamp"] = *timestamp;
    return j;
}

ChainTransaction ChainTransaction::from_json(const nlohmann::json& doc) {
    ChainTransaction tx;
    tx.tx_id = Digest::from_hex(doc.at("tx_id").get<std::string>());
    tx.anchor_payload = Digest::from_hex(doc.at("anchor_payload").get<std::string>());
    tx.issuer_address = doc.at("issuer_address").get<std::string>();
    tx.nonce = doc.at("nonce").get<std::string>();
    tx.size_bytes = doc.at("size_bytes").get<std::int64_t>();
    tx.fee_paid = doc.at("fee_paid").get<std::int64_t>();
    if (doc.contains("block_height")) tx.block_height = doc["block_height"].get<std::int64_t>();
    if (doc.contains("timestamp")) tx.timestamp = doc["timestamp"].get<std::int64_t>();
    return tx;
}

nlohmann::json Block::to_json() const {
    auto j = block_body(*this);
    j["block_hash"] = block_hash.hex();
    return j;
}

Block Block::from_json(const nlohmann::json& doc) {
    Block b;
    b.height = doc.at("height").get<std::int64_t>();
    b.prev_hash = Digest::from_hex(doc.at("prev_hash").get<std::string>());
    for (const auto& id : doc.at("tx_ids")) {
        b.tx_ids.push_back(Digest::from_hex(id.get<std::string>()));
    }
    b.timestamp = doc.at("timestamp").get<std::int64_t>();
    b.block_hash = Digest::from_hex(doc.at("block_hash").get<std::string>());
    return b;
}

Digest remote_root(const ChainClient& client, const Digest& tx_id) {
    const auto tx = client.get_transaction(tx_id);
    if (!tx) {
        throw TxNotFound("transaction " + tx_id.hex() + " not found");
    }
    if (!tx->block_height) {
        throw TxUnconfirmed("transaction " + tx_id.hex() + " is awaiting confirmation");
    }
    return tx->anchor_payload;
}

SimulatedChain::SimulatedChain(std::filesystem::path store_path, std::int64_t fee_rate)
    : path_(std::move(store_path)), fee_rate_(fee_rate) {
    if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path());
    }
    replay();
}

void SimulatedChain::replay() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) {
        return;  // fresh store; the journal appears on first append
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto where = path_.string() + ":" + std::to_string(line_no);
        nlohmann::json rec;
        try {
            rec = parse_json(line);
        } catch (const CanonicalError& e) {
            throw CorruptStore("unparseable journal record at " + where + ": " + e.what());
        }
        try {
            const auto kind = rec.at("kind").get<std::string>();
            if (kind == "tx") {
                auto tx = ChainTransaction::from_json(rec);
                if (compute_tx_id(tx) != tx.tx_id) {
                    throw CorruptStore("transaction at " + where +
                                       " does not hash to its recorded id");
                }
                if (txs_.contains(tx.tx_id)) {
                    throw CorruptStore("duplicate transaction at " + where);
                }
                tx.block_height.reset();  // placement is derived from block records
                tx.timestamp.reset();
                order_.push_back(tx.tx_id);
                pending_.push_back(tx.tx_id);
                txs_.emplace(tx.tx_id, std::move(tx));
            } else if (kind == "block") {
                auto block = Block::from_json(rec);
                const auto expected_prev =
                    blocks_.empty() ? zero_digest() : blocks_.back().block_hash;
                if (block.height != static_cast<std::int64_t>(blocks_.size()) ||
                    block.prev_hash != expected_prev) {
                    throw CorruptStore("broken chain linkage at " + where);
                }
                if (compute_block_hash(block) != block.block_hash) {
                    throw CorruptStore("block at " + where +
                                       " does not hash to its recorded hash");
                }
                for (const auto& id : block.tx_ids) {
                    const auto it = txs_.find(id);
                    if (it == txs_.end() || it->second.block_height) {
                        throw CorruptStore("block at " + where +
                                           " references an unknown or already-mined transaction");
                    }
                    it->second.block_height = block.height;
                    it->second.timestamp = block.timestamp;
                    std::erase(pending_, id);
                }
                blocks_.push_back(std::move(block));
            } else {
                throw CorruptStore("unknown record kind \"" + kind + "\" at " + where);
            }
        } catch (const nlohmann::json::exception& e) {
            throw CorruptStore("malformed journal record at " + where + ": " + e.what());
        } catch (const Error& e) {
            if (dynamic_cast<const CorruptStore*>(&e)) throw;
            throw CorruptStore("malformed journal record at " + where + ": " + e.what());
        }
    }
}

void SimulatedChain::append_record(nlohmann::json record, std::string_view kind) {
    record["kind"] = std::string(kind);
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) {
        throw ChainError("cannot append to chain store " + path_.string());
    }
    out << canonicalize(record) << '\n';
}

Digest SimulatedChain::submit_anchor(const Digest& root, const std::string& issuer_address) {
    std::lock_guard lock(mu_);
    if (fee_rate_ <= 0) {
        throw ChainError("fee rate unset; the simulator needs a positive units-per-byte rate");
    }
    ChainTransaction tx;
    tx.anchor_payload = root;
    tx.issuer_address = issuer_address;
    tx.nonce = random_nonce();
    tx.size_bytes = static_cast<std::int64_t>(
        canonicalize(tx_body(root, issuer_address, tx.nonce)).size());
    tx.fee_paid = fee_for(tx.size_bytes, fee_rate_);
    tx.tx_id = compute_tx_id(tx);

    append_record(tx.to_json(), "tx");
    order_.push_back(tx.tx_id);
    pending_.push_back(tx.tx_id);
    txs_.emplace(tx.tx_id, tx);
    return tx.tx_id;
}

std::optional<ChainTransaction> SimulatedChain::get_transaction(const Digest& tx_id) const {
    std::lock_guard lock(mu_);
    const auto it = txs_.find(tx_id);
    if (it == txs_.end()) return std::nullopt;
    return it->second;
}

int SimulatedChain::confirmations(const Digest& tx_id) const {
    std::lock_guard lock(mu_);
    const auto it = txs_.find(tx_id);
    if (it == txs_.end()) {
        throw TxNotFound("transaction " + tx_id.hex() + " not found");
    }
    if (!it->second.block_height) return 0;
    return static_cast<int>(static_cast<std::int64_t>(blocks_.size()) -
                            *it->second.block_height);
}

std::int64_t SimulatedChain::fee_rate() const {
    return fee_rate_;
}

Block SimulatedChain::mine_block(std::int64_t timestamp) {
    std::lock_guard lock(mu_);
    const auto prev_ts = blocks_.empty() ? std::numeric_limits<std::int64_t>::min()
                                         : blocks_.back().timestamp;
    if (timestamp <= prev_ts) {
        throw ChainError("block timestamp " + std::to_string(timestamp) +
                         " is not after the previous block's " + std::to_string(prev_ts));
    }
    Block block;
    block.height = static_cast<std::int64_t>(blocks_.size());
    block.prev_hash = blocks_.empty() ? zero_digest() : blocks_.back().block_hash;
    block.tx_ids = pending_;
    block.timestamp = timestamp;
    block.block_hash = compute_block_hash(block);

    append_record(block.to_json(), "block");
    for (const auto& id : pending_) {
        auto& tx = txs_.at(id);
        tx.block_height = block.height;
        tx.timestamp = timestamp;
    }
    pending_.clear();
    blocks_.push_back(block);
    return block;
}

std::vector<Block> SimulatedChain::blocks() const {
    std::lock_guard lock(mu_);
    return blocks_;
}

std::vector<ChainTransaction> SimulatedChain::transactions() const {
    std::lock_guard lock(mu_);
    std::vector<ChainTransaction> out;
    out.reserve(order_.size());
    for (const auto& id : order_) out.push_back(txs_.at(id));
    return out;
}

std::size_t SimulatedChain::pending_count() const {
    std::lock_guard lock(mu_);
    return pending_.size();
}

}  // namespace credanchor
