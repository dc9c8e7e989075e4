// End-to-end acceptance suite. Each case prints one pass/fail line so the
// whole contract is auditable from the test log.

#include <cstdio>
#include <fstream>
#include <functional>
#include <random>

#include "doctest.h"

#include "credanchor/canonical.hpp"
#include "credanchor/chain_sim.hpp"
#include "credanchor/errors.hpp"
#include "credanchor/issuance.hpp"
#include "credanchor/issuer_service.hpp"
#include "credanchor/verification.hpp"
#include "support.hpp"

using namespace credanchor;
using namespace credanchor::test;

namespace {

struct Criterion {
    int number;
    const char* title;
    bool ok = true;

    ~Criterion() {
        std::printf("criterion %2d [%s] %s\n", number, ok ? "PASS" : "FAIL", title);
        std::fflush(stdout);
    }
    void require(bool condition) {
        CHECK(condition);
        ok = ok && condition;
    }
};

bool all_steps_passed(const VerificationReport& r) {
    if (r.steps.size() != 9 || !r.valid) return false;
    for (std::size_t i = 0; i < 9; ++i) {
        if (r.steps[i].name != kStepOrder[i]) return false;
        if (r.steps[i].status != StepStatus::passed) return false;
    }
    return true;
}

bool failed_exactly_at(const VerificationReport& r, StepName failing) {
    if (r.steps.size() != 9 || r.valid) return false;
    bool seen = false;
    for (std::size_t i = 0; i < 9; ++i) {
        const auto& step = r.steps[i];
        if (step.name == failing) {
            if (step.status != StepStatus::failed) return false;
            seen = true;
        } else if (!seen && step.status != StepStatus::passed) {
            return false;
        } else if (seen && step.name != failing && step.status != StepStatus::skipped) {
            return false;
        }
    }
    return seen;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

Digest independent_root(std::vector<Digest> nodes) {
    if (nodes.size() == 1) return nodes.front();
    std::vector<Digest> up;
    for (std::size_t i = 0; i < nodes.size(); i += 2) {
        if (i + 1 < nodes.size()) {
            std::vector<std::uint8_t> buf(nodes[i].bytes.begin(), nodes[i].bytes.end());
            buf.insert(buf.end(), nodes[i + 1].bytes.begin(), nodes[i + 1].bytes.end());
            up.push_back(hash_bytes(buf));
        } else {
            up.push_back(nodes[i]);
        }
    }
    return independent_root(std::move(up));
}

}  // namespace

TEST_CASE("1. end-to-end happy path: five invited recipients, one anchor") {
    Criterion c{1, "happy path: 5 receipts all valid, exactly 1 chain transaction"};
    TempDir tmp;
    const auto key = fixture_key();
    auto store = make_store(tmp.path / "store", key);
    SimulatedChain chain(tmp.path / "chain.jsonl");

    std::vector<Credential> batch;
    for (int i = 0; i < 5; ++i) {
        const auto email = "student" + std::to_string(i) + "@example.edu";
        const auto invite = store.create_invite(
            email, "Hello {{recipient_email}}, {{issuer_id}} invites you.");
        store.accept_invite(invite.invite_id, "recipient-key-" + std::to_string(i));
        auto cred = make_credential(i);
        cred.recipient_address = *store.address_for_email(email);
        batch.push_back(cred);
    }

    const auto receipts = issue_batch(store, batch, key, "class-of-2019", chain);
    chain.mine_block(kMineTime);

    c.require(receipts.size() == 5);
    c.require(chain.transactions().size() == 1);
    StoreIssuerFetcher fetcher(tmp.path / "store");
    for (const auto& r : receipts) {
        c.require(all_steps_passed(verify_credential(r, chain, fetcher, kVerifyTime)));
        c.require(r.proof.root == chain.transactions()[0].anchor_payload);
    }
}

TEST_CASE("2. tamper sweep: 48 mutations, 48 invalids, zero false accepts") {
    Criterion c{2, "tamper sweep: 6 mutations x 8 receipts all invalid at the right step"};
    TempDir tmp;
    const auto key = fixture_key();
    auto store = make_store(tmp.path / "store", key);
    SimulatedChain chain(tmp.path / "chain.jsonl");
    const auto receipts = issue_batch(store, make_batch(8), key, "sweep", chain);
    chain.mine_block(kMineTime);
    StoreIssuerFetcher fetcher(tmp.path / "store");

    const auto flip = [](std::string hex, std::size_t pos) {
        hex[pos] = hex[pos] == '0' ? '1' : '0';
        return hex;
    };
    using Mutator = std::function<void(nlohmann::json&)>;
    const std::vector<std::pair<Mutator, StepName>> mutations = {
        {[](nlohmann::json& d) {
             d["credential"]["title"] = d["credential"]["title"].get<std::string>() + "!";
         },
         StepName::compare_hashes},
        {[&](nlohmann::json& d) {
             d["credential"]["signature"] = flip(d["credential"]["signature"], 3);
         },
         StepName::compare_hashes},
        {[&](nlohmann::json& d) { d["proof"][0]["hash"] = flip(d["proof"][0]["hash"], 7); },
         StepName::check_merkle_root},
        {[](nlohmann::json& d) {
             const std::string side = d["proof"][0]["side"];
             d["proof"][0]["side"] = side == "left" ? "right" : "left";
         },
         StepName::check_merkle_root},
        {[&](nlohmann::json& d) { d["merkle_root"] = flip(d["merkle_root"], 11); },
         StepName::check_merkle_root},
        {[&](nlohmann::json& d) { d["tx_id"] = flip(d["tx_id"], 13); },
         StepName::get_tx_id},
    };

    int checked = 0;
    int invalid = 0;
    for (const auto& receipt : receipts) {
        for (const auto& [fn, step] : mutations) {
            auto doc = receipt.to_json();
            fn(doc);
            const auto tampered = MerkleReceipt::from_json(doc);
            const auto report = verify_credential(tampered, chain, fetcher, kVerifyTime);
            ++checked;
            invalid += report.valid ? 0 : 1;
            c.require(failed_exactly_at(report, step));
        }
    }
    c.require(checked == 48);
    c.require(invalid == 48);
}

TEST_CASE("3. merkle oracle equivalence and exhaustive proof soundness, sizes 1..16") {
    Criterion c{3, "merkle roots match an independent recursive oracle; all mutations fail"};
    std::mt19937_64 rng(303);
    for (std::size_t n = 1; n <= 16; ++n) {
        std::vector<Digest> leaves;
        for (std::size_t i = 0; i < n; ++i) leaves.push_back(random_digest(rng));
        const auto tree = build_tree(leaves);
        c.require(tree.root() == independent_root(leaves));
        for (std::size_t i = 0; i < n; ++i) {
            const auto proof = generate_proof(tree, i);
            c.require(verify_proof(proof));

            auto leaf_mut = proof;
            leaf_mut.leaf.bytes[i % 32] ^= 0x40;
            c.require(!verify_proof(leaf_mut));

            auto root_mut = proof;
            root_mut.root.bytes[(i + 5) % 32] ^= 0x01;
            c.require(!verify_proof(root_mut));

            for (std::size_t k = 0; k < proof.path.size(); ++k) {
                auto sib = proof;
                sib.path[k].sibling.bytes[(k * 7) % 32] ^= 0x02;
                c.require(!verify_proof(sib));

                auto side = proof;
                side.path[k].side =
                    side.path[k].side == Side::left ? Side::right : Side::left;
                c.require(!verify_proof(side));
            }
        }
    }
}

TEST_CASE("4. batch revocation fails check_revoked; re-issue verifies fully") {
    Criterion c{4, "revoked batch fails at check_revoked; corrected re-issue is valid"};
    TempDir tmp;
    const auto key = fixture_key();
    auto store = make_store(tmp.path / "store", key);
    SimulatedChain chain(tmp.path / "chain.jsonl");
    StoreIssuerFetcher fetcher(tmp.path / "store");

    const auto original =
        issue_batch(store, make_batch(4, "v1"), key, "degrees-v1", chain);
    chain.mine_block(kMineTime);
    store.revoke("degrees-v1", "name misspelled on two records", kMineTime + 50);

    for (const auto& r : original) {
        const auto report = verify_credential(r, chain, fetcher, kVerifyTime);
        c.require(failed_exactly_at(report, StepName::check_revoked));
        // Steps 1 through 7 all passed before the revocation check.
        for (int i = 0; i < 7; ++i) {
            c.require(report.steps[i].status == StepStatus::passed);
        }
    }

    // Corrected batch under a new name, same credential ids.
    auto corrected = make_batch(4, "v2");
    for (auto& cred : corrected) cred.title += " (corrected)";
    const auto reissued = issue_batch(store, corrected, key, "degrees-v2", chain);
    chain.mine_block(kMineTime + 100);
    for (const auto& r : reissued) {
        c.require(all_steps_passed(verify_credential(r, chain, fetcher, kVerifyTime)));
    }
}

TEST_CASE("5. expiry boundary: expires == now fails, expires == now + 1 passes") {
    Criterion c{5, "expiry is strict: expires == now invalid, now + 1 valid"};
    auto batch = make_batch(2, "exp");
    batch[0].expires = kVerifyTime;
    batch[1].expires = kVerifyTime + 1;

    TempDir tmp;
    const auto key = fixture_key();
    auto store = make_store(tmp.path / "store", key);
    SimulatedChain chain(tmp.path / "chain.jsonl");
    const auto receipts = issue_batch(store, batch, key, "exp", chain);
    chain.mine_block(kMineTime);
    StoreIssuerFetcher fetcher(tmp.path / "store");

    c.require(failed_exactly_at(
        verify_credential(receipts[0], chain, fetcher, kVerifyTime),
        StepName::check_expiry));
    c.require(all_steps_passed(
        verify_credential(receipts[1], chain, fetcher, kVerifyTime)));
}

TEST_CASE("6. privacy: credential contents never reach the chain store") {
    Criterion c{6, "sentinel planted in every field is absent from the chain store"};
    TempDir tmp;
    const auto key = fixture_key();
    auto store = make_store(tmp.path / "store", key);
    SimulatedChain chain(tmp.path / "chain.jsonl");

    const std::string sentinel = "CONFIDENTIAL-c617";
    std::vector<Credential> batch;
    for (int i = 0; i < 4; ++i) {
        Credential cred;
        cred.id = "urn:" + sentinel + ":" + std::to_string(i);
        cred.issuer_id = "urn:issuer:test:registrar";
        cred.recipient_address = sentinel + "-address-" + std::to_string(i);
        cred.title = sentinel + " Degree";
        cred.description = "Awarded to " + sentinel + " Person " + std::to_string(i);
        cred.issued_on = kIssuedOn;
        cred.batch_name = sentinel;
        batch.push_back(cred);
    }
    issue_batch(store, batch, key, sentinel + "-batch", chain);
    chain.mine_block(kMineTime);

    const auto journal = slurp(tmp.path / "chain.jsonl");
    c.require(journal.find(sentinel) == std::string::npos);
    c.require(journal.find("tx") != std::string::npos);  // the store is not empty
}

TEST_CASE("7. issuer key revoked before the anchoring block fails parse_issuer_keys") {
    Criterion c{7, "back-dated key revocation fails at parse_issuer_keys"};
    TempDir tmp;
    const auto key = fixture_key();
    auto store = make_store(tmp.path / "store", key);
    SimulatedChain chain(tmp.path / "chain.jsonl");
    const auto receipts = issue_batch(store, make_batch(3), key, "window", chain);
    chain.mine_block(kMineTime);
    StoreIssuerFetcher fetcher(tmp.path / "store");

    c.require(all_steps_passed(
        verify_credential(receipts[0], chain, fetcher, kVerifyTime)));

    store.set_key_revoked(key.public_key, kMineTime - 1);
    for (const auto& r : receipts) {
        c.require(failed_exactly_at(verify_credential(r, chain, fetcher, kVerifyTime),
                                    StepName::parse_issuer_keys));
    }
}

TEST_CASE("8. canonicalization: 1000 key-order permutations hash to one digest") {
    Criterion c{8, "1000 random key-order permutations of a credential hash identically"};
    const auto key = fixture_key();
    const auto cred = sign_credential(make_credential(8), key);
    const auto expected = credential_hash(cred);

    // Rebuild the credential document from raw text with shuffled key order.
    const auto doc = cred.to_json();
    std::vector<std::pair<std::string, std::string>> fields;
    for (const auto& [k, v] : doc.items()) {
        fields.emplace_back(k, v.dump());
    }
    std::mt19937_64 rng(808);
    for (int i = 0; i < 1000; ++i) {
        std::shuffle(fields.begin(), fields.end(), rng);
        std::string text = "{";
        for (std::size_t f = 0; f < fields.size(); ++f) {
            if (f > 0) text += ",";
            text += "\"" + fields[f].first + "\":" + fields[f].second;
        }
        text += "}";
        const auto digest = hash_bytes(canonicalize(parse_json(text)));
        c.require(digest == expected);
    }
}

TEST_CASE("9. fee law: fee_paid == size_bytes x fee_rate for rates 1, 2, 10") {
    Criterion c{9, "every transaction pays size_bytes x fee_rate"};
    TempDir tmp;
    std::mt19937_64 rng(909);
    for (std::int64_t rate : {1, 2, 10}) {
        SimulatedChain chain(tmp.path / ("chain" + std::to_string(rate) + ".jsonl"), rate);
        for (int i = 0; i < 5; ++i) {
            chain.submit_anchor(random_digest(rng), "issuer-" + std::to_string(i));
        }
        chain.mine_block(1000);
        chain.submit_anchor(random_digest(rng), "late");
        const auto txs = chain.transactions();
        c.require(txs.size() == 6);
        for (const auto& tx : txs) {
            c.require(tx.fee_paid == tx.size_bytes * rate);
            c.require(tx.anchor_payload.bytes.size() == 32);
        }
    }
}

TEST_CASE("10. HTTP and in-process verification agree report for report") {
    Criterion c{10, "verification over HTTP equals in-process verification"};
    TempDir tmp;
    const auto key = fixture_key();
    auto store = make_store(tmp.path / "store", key);
    SimulatedChain chain(tmp.path / "chain.jsonl");
    const auto receipts = issue_batch(store, make_batch(4), key, "parity", chain);
    chain.mine_block(kMineTime);
    store.revoke(receipts[2].credential.id, "parity check", kMineTime + 1);

    IssuerService service(tmp.path / "store", "127.0.0.1", 0);
    store.set_base_url(service.base_url());
    StoreIssuerFetcher local(tmp.path / "store");
    HttpIssuerFetcher http;

    for (const auto& r : receipts) {
        auto over_http = r;
        over_http.issuer_profile_url = service.base_url() + "/issuer/profile.json";
        const auto report_http =
            verify_credential(over_http, chain, http, kVerifyTime);
        const auto report_local = verify_credential(r, chain, local, kVerifyTime);
        c.require(report_http == report_local);
        c.require(render_report(report_http, ReportFormat::json) ==
                  render_report(report_local, ReportFormat::json));
    }
}
