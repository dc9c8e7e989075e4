#include "credanchor/verification.hpp"

#include <cctype>
#include <optional>

#include "credanchor/canonical.hpp"
#include "credanchor/errors.hpp"

namespace credanchor {

namespace {

struct StepOutcome {
    bool passed;
    std::string detail;
};

std::string short_hex(const Digest& d) {
    return d.hex().substr(0, 12) + "…";
}

}  // namespace

std::string_view to_string(StepName name) {
    switch (name) {
        case StepName::get_tx_id: return "get_tx_id";
        case StepName::compute_local_hash: return "compute_local_hash";
        case StepName::fetch_remote_hash: return "fetch_remote_hash";
        case StepName::get_issuer_profile: return "get_issuer_profile";
        case StepName::parse_issuer_keys: return "parse_issuer_keys";
        case StepName::compare_hashes: return "compare_hashes";
        case StepName::check_merkle_root: return "check_merkle_root";
        case StepName::check_revoked: return "check_revoked";
        case StepName::check_expiry: return "check_expiry";
    }
    return "unknown";
}

std::string_view to_string(StepStatus status) {
    switch (status) {
        case StepStatus::passed: return "passed";
        case StepStatus::failed: return "failed";
        case StepStatus::skipped: return "skipped";
    }
    return "unknown";
}

StepName step_name_from_string(std::string_view text) {
    for (const auto name : kStepOrder) {
        if (to_string(name) == text) return name;
    }
    throw SchemaError("unknown verification step name: " + std::string(text));
}

StepStatus step_status_from_string(std::string_view text) {
    if (text == "passed") return StepStatus::passed;
    if (text == "failed") return StepStatus::failed;
    if (text == "skipped") return StepStatus::skipped;
    throw SchemaError("unknown verification step status: " + std::string(text));
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& step : steps) {
        list.push_back({{"name", std::string(to_string(step.name))},
                        {"status", std::string(to_string(step.status))},
                        {"detail", step.detail}});
    }
    return nlohmann::json{{"steps", std::move(list)},
                          {"overall", valid ? "valid" : "invalid"},
                          {"verified_at", verified_at}};
}

VerificationReport VerificationReport::from_json(const nlohmann::json& doc) {
    VerificationReport report;
    try {
        for (const auto& step : doc.at("steps")) {
            report.steps.push_back(
                {step_name_from_string(step.at("name").get<std::string>()),
                 step_status_from_string(step.at("status").get<std::string>()),
                 step.at("detail").get<std::string>()});
        }
        const auto overall = doc.at("overall").get<std::string>();
        if (overall != "valid" && overall != "invalid") {
            throw SchemaError("overall must be \"valid\" or \"invalid\"");
        }
        report.valid = overall == "valid";
        report.verified_at = doc.at("verified_at").get<std::int64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("verification report: ") + e.what());
    }
    return report;
}

VerificationReport verify_credential(const MerkleReceipt& receipt,
                                     const ChainClient& chain,
                                     IssuerFetcher& fetcher,
                                     std::int64_t now) {
    VerificationReport report;
    report.verified_at = now;

    // State threaded between steps.
    std::optional<ChainTransaction> tx;
    std::optional<Digest> local_hash;
    std::optional<Digest> remote_hash;
    std::optional<IssuerProfile> profile;

    bool failed = false;
    const auto run = [&](StepName name, auto&& body) {
        if (failed) {
            report.steps.push_back({name, StepStatus::skipped,
                                    "not evaluated: an earlier step failed"});
            return;
        }
        StepOutcome outcome{false, ""};
        try {
            outcome = body();
        } catch (const Error& e) {
            outcome = {false, e.what()};
        } catch (const std::exception& e) {
            outcome = {false, std::string("unexpected error: ") + e.what()};
        }
        report.steps.push_back({name,
                                outcome.passed ? StepStatus::passed : StepStatus::failed,
                                std::move(outcome.detail)});
        failed = failed || !outcome.passed;
    };

    run(StepName::get_tx_id, [&]() -> StepOutcome {
        tx = chain.get_transaction(receipt.tx_id);
        if (!tx) {
            return {false, "transaction " + receipt.tx_id.hex() + " not found on chain"};
        }
        if (!tx->block_height) {
            return {false, "transaction " + short_hex(receipt.tx_id) +
                               " is awaiting confirmation"};
        }
        const int confs = chain.confirmations(receipt.tx_id);
        return {true, "transaction " + short_hex(receipt.tx_id) + " confirmed at height " +
                          std::to_string(*tx->block_height) + " (" +
                          std::to_string(confs) + " confirmation" +
                          (confs == 1 ? "" : "s") + ")"};
    });

    run(StepName::compute_local_hash, [&]() -> StepOutcome {
        local_hash = credential_hash(receipt.credential);
        return {true, "credential hashes to " + local_hash->hex()};
    });

    run(StepName::fetch_remote_hash, [&]() -> StepOutcome {
        remote_hash = remote_root(chain, receipt.tx_id);
        return {true, "anchored hash is " + remote_hash->hex()};
    });

    run(StepName::get_issuer_profile, [&]() -> StepOutcome {
        profile = fetcher.fetch_profile(receipt.issuer_profile_url);
        return {true, "profile \"" + profile->name + "\" with " +
                          std::to_string(profile->public_keys.size()) + " key(s)"};
    });

    run(StepName::parse_issuer_keys, [&]() -> StepOutcome {
        // The key that anchored the batch must have been valid when the
        // block fixed its timestamp; the chain itself plays the timestamping
        // authority here.
        const std::int64_t anchored_at = *tx->timestamp;
        const IssuerKey* anchor_key = nullptr;
        for (const auto& k : profile->public_keys) {
            if (k.key == tx->issuer_address) {
                anchor_key = &k;
                break;
            }
        }
        if (anchor_key == nullptr) {
            return {false, "anchoring key " + tx->issuer_address +
                               " is not listed in the issuer profile"};
        }
        if (!anchor_key->valid_at(anchored_at)) {
            std::string why = "was not valid";
            if (anchored_at < anchor_key->created) {
                why = "had not been created";
            } else if (anchor_key->revoked && anchored_at >= *anchor_key->revoked) {
                why = "was already revoked (revoked at " +
                      std::to_string(*anchor_key->revoked) + ")";
            } else if (anchor_key->expires && anchored_at >= *anchor_key->expires) {
                why = "had expired (expired at " + std::to_string(*anchor_key->expires) + ")";
            }
            return {false, "issuer key " + why + " at anchoring time " +
                               std::to_string(anchored_at)};
        }
        return {true, "issuer key was valid at anchoring time " +
                          std::to_string(anchored_at)};
    });

    run(StepName::compare_hashes, [&]() -> StepOutcome {
        if (*local_hash != receipt.target_hash) {
            return {false, "local hash " + short_hex(*local_hash) +
                               " does not match receipt hash " +
                               short_hex(receipt.target_hash)};
        }
        if (*local_hash != receipt.proof.leaf) {
            return {false, "receipt proof is for a different credential hash"};
        }
        return {true, "local and receipt hashes match"};
    });

    run(StepName::check_merkle_root, [&]() -> StepOutcome {
        if (!verify_proof(receipt.proof)) {
            return {false, "proof path does not fold to the receipt's merkle root"};
        }
        if (receipt.proof.root != *remote_hash) {
            return {false, "receipt merkle root " + short_hex(receipt.proof.root) +
                               " does not match anchored root " + short_hex(*remote_hash)};
        }
        return {true, "proof folds to the anchored merkle root"};
    });

    run(StepName::check_revoked, [&]() -> StepOutcome {
        const auto list = fetcher.fetch_revocations(profile->revocation_list_url);
        if (const auto* entry = list.entry_for(receipt.credential.id,
                                               receipt.credential.batch_name)) {
            return {false, "revoked by issuer: target \"" + entry->target + "\" (" +
                               entry->reason + ")"};
        }
        return {true, "credential and batch are not on the revocation list"};
    });

    run(StepName::check_expiry, [&]() -> StepOutcome {
        if (!receipt.credential.expires) {
            return {true, "credential carries no expiry date"};
        }
        if (*receipt.credential.expires > now) {
            return {true, "valid until " + std::to_string(*receipt.credential.expires)};
        }
        return {false, "expired at " + std::to_string(*receipt.credential.expires) +
                           " (verified at " + std::to_string(now) + ")"};
    });

    report.valid = !failed;
    return report;
}

std::string render_report(const VerificationReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        return canonicalize(report.to_json());
    }
    std::string out;
    for (const auto& step : report.steps) {
        std::string status(to_string(step.status));
        for (auto& c : status) c = static_cast<char>(std::toupper(c));
        out += std::string(to_string(step.name)) + ": " + status + " — " + step.detail + "\n";
    }
    out += std::string("overall: ") + (report.valid ? "VALID" : "INVALID") + "\n";
    return out;
}

}  // namespace credanchor
