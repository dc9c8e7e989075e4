#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "credanchor/chain.hpp"
#include "credanchor/issuance.hpp"
#include "credanchor/issuer_store.hpp"

namespace credanchor {

/// The nine checks a third party runs, always in this order.
enum class StepName {
    get_tx_id,
    compute_local_hash,
    fetch_remote_hash,
    get_issuer_profile,
    parse_issuer_keys,
    compare_hashes,
    check_merkle_root,
    check_revoked,
    check_expiry,
};

inline constexpr std::array<StepName, 9> kStepOrder{
    StepName::get_tx_id,          StepName::compute_local_hash,
    StepName::fetch_remote_hash,  StepName::get_issuer_profile,
    StepName::parse_issuer_keys,  StepName::compare_hashes,
    StepName::check_merkle_root,  StepName::check_revoked,
    StepName::check_expiry,
};

enum class StepStatus { passed, failed, skipped };

std::string_view to_string(StepName name);
std::string_view to_string(StepStatus status);
StepName step_name_from_string(std::string_view text);
StepStatus step_status_from_string(std::string_view text);

struct VerificationStep {
    StepName name;
    StepStatus status;
    std::string detail;

    bool operator==(const VerificationStep&) const = default;
};

/// Ordered step results plus the overall verdict. After the first failed
/// step every later step is skipped, so a report never claims a downstream
/// check succeeded on data an earlier check already rejected.
struct VerificationReport {
    std::vector<VerificationStep> steps;  // always the nine names, in order
    bool valid = false;                   // true iff all nine passed
    std::int64_t verified_at = 0;

    bool operator==(const VerificationReport&) const = default;

    [[nodiscard]] nlohmann::json to_json() const;
    static VerificationReport from_json(const nlohmann::json& doc);
};

/// Where the verifier gets the issuer's public documents. HTTP is the
/// production implementation; tests plug in an in-process reader.
class IssuerFetcher {
public:
    virtual ~IssuerFetcher() = default;
    virtual IssuerProfile fetch_profile(const std::string& url) = 0;
    virtual RevocationList fetch_revocations(const std::string& url) = 0;
};

/// Runs the nine-step pipeline against the receipt. Never throws: every
/// failure mode becomes a failed step with a detail message. `now` is an
/// explicit parameter so runs are reproducible; issuer-key validity is
/// judged at the anchoring block's timestamp, not at `now`.
VerificationReport verify_credential(const MerkleReceipt& receipt,
                                     const ChainClient& chain,
                                     IssuerFetcher& fetcher,
                                     std::int64_t now);

enum class ReportFormat { text, json };

/// Text: nine "name: PASSED|FAILED|SKIPPED — detail" lines plus an overall
/// line. JSON: lossless round trip through VerificationReport::from_json.
std::string render_report(const VerificationReport& report, ReportFormat format);

}  // namespace credanchor
