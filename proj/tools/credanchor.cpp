#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "credanchor/canonical.hpp"
#include "credanchor/chain_sim.hpp"
#include "credanchor/credential.hpp"
#include "credanchor/errors.hpp"
#include "credanchor/issuance.hpp"
#include "credanchor/issuer_service.hpp"
#include "credanchor/issuer_store.hpp"
#include "credanchor/keys.hpp"
#include "credanchor/verification.hpp"

namespace fs = std::filesystem;
using namespace credanchor;

namespace {

// 0: success / credential valid. 1: verification ran and found the
// credential invalid. 2: usage or IO error. Scripts rely on this split.
constexpr int kExitValid = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;

constexpr const char* kDefaultInviteTemplate =
    "Hello {{recipient_email}},\n"
    "\n"
    "{{issuer_id}} would like to issue you a blockchain credential.\n"
    "To accept, reply with your blockchain address:\n"
    "\n"
    "    credanchor accept --invite <invite-id> --address <your-address>\n"
    "\n"
    "Your credential will be delivered as a receipt file that you alone\n"
    "decide who to share with.\n";

std::int64_t now_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read " + path.string());
    }
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

std::string read_trimmed(const fs::path& path) {
    auto text = read_file(path);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' ||
                             text.back() == ' ' || text.back() == '\t')) {
        text.pop_back();
    }
    return text;
}

void write_new_file(const fs::path& path, const std::string& content) {
    if (fs::exists(path)) {
        throw Error("refusing to overwrite existing file " + path.string());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << content;
}

int cmd_keygen(const std::string& out_prefix) {
    const auto key = KeyPair::generate();
    const fs::path pub_path = out_prefix + ".pub";
    const fs::path key_path = out_prefix + ".key";
    write_new_file(pub_path, key.public_key + "\n");
    write_new_file(key_path, key.private_key + "\n");
    fs::permissions(key_path,
                    fs::perms::owner_read | fs::perms::owner_write,
                    fs::perm_options::replace);
    std::cout << "public key: " << key.public_key << "\n"
              << "wrote " << pub_path.string() << " and " << key_path.string() << "\n";
    return kExitValid;
}

std::string load_key_material(const std::string& file_or_hex) {
    if (fs::exists(file_or_hex)) {
        return read_trimmed(file_or_hex);
    }
    return file_or_hex;
}

int cmd_init(const std::string& store_dir, const std::string& issuer_id,
             const std::string& name, const std::string& public_key,
             const std::string& base_url, std::int64_t key_created) {
    const auto store = IssuerStore::init(store_dir, issuer_id, name,
                                         load_key_material(public_key), key_created,
                                         base_url);
    std::cout << "initialized issuer store " << store.dir().string() << "\n"
              << "profile url: " << store.profile_url() << "\n";
    return kExitValid;
}

int cmd_invite(const std::string& store_dir, const std::string& email,
               const std::string& template_path, const std::string& out_path) {
    auto store = IssuerStore::open(store_dir);
    const std::string tmpl =
        template_path.empty() ? kDefaultInviteTemplate : read_file(template_path);
    const auto invite = store.create_invite(email, tmpl);

    fs::path artifact = out_path.empty()
                            ? store.dir() / "invites" / (invite.invite_id + ".json")
                            : fs::path(out_path);
    fs::create_directories(artifact.parent_path());
    std::ofstream out(artifact, std::ios::binary | std::ios::trunc);
    out << canonicalize(invite.to_json()) << '\n';

    std::cout << "invite id: " << invite.invite_id << "\n"
              << "wrote " << artifact.string() << "\n";
    return kExitValid;
}

int cmd_accept(const std::string& store_dir, const std::string& invite_id,
               const std::string& address) {
    auto store = IssuerStore::open(store_dir);
    const auto resp = store.accept_invite(invite_id, address);
    std::cout << "bound invite " << resp.invite_id << " to address "
              << resp.recipient_address << "\n";
    return kExitValid;
}

// Default block timestamps stay monotonic even when commands run within the
// same wall-clock second; an explicit --timestamp is taken verbatim.
std::int64_t effective_mine_time(const SimulatedChain& chain, std::int64_t requested,
                                 bool explicit_ts) {
    if (explicit_ts) return requested;
    const auto blocks = chain.blocks();
    if (blocks.empty()) return requested;
    return std::max(requested, blocks.back().timestamp + 1);
}

int cmd_issue(const std::string& store_dir, const std::string& chain_path,
              const std::string& key_path, const std::string& batch_dir,
              const std::string& batch_name, const std::string& out_dir,
              bool no_mine, std::int64_t fee_rate, std::int64_t timestamp,
              bool explicit_ts) {
    auto store = IssuerStore::open(store_dir);
    const auto key = KeyPair::from_private(load_key_material(key_path));

    std::vector<fs::path> files;
    if (!fs::is_directory(batch_dir)) {
        throw Error("batch directory " + batch_dir + " does not exist");
    }
    for (const auto& entry : fs::directory_iterator(batch_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw Error("no credential files (*.json) in " + batch_dir);
    }
    std::vector<Credential> credentials;
    credentials.reserve(files.size());
    for (const auto& file : files) {
        credentials.push_back(load_credential(file));
    }

    SimulatedChain chain(chain_path, fee_rate);
    const auto receipts = issue_batch(store, std::move(credentials), key, batch_name, chain);
    if (!no_mine) {
        chain.mine_block(effective_mine_time(chain, timestamp, explicit_ts));
    }

    fs::create_directories(out_dir);
    for (const auto& receipt : receipts) {
        save_receipt(receipt, fs::path(out_dir) / (receipt.credential.id + ".receipt.json"));
    }
    std::cout << "tx_id: " << receipts.front().tx_id.hex() << "\n"
              << "wrote " << receipts.size() << " receipt(s) to " << out_dir << "\n";
    if (no_mine) {
        std::cout << "transaction left unconfirmed; run `credanchor chain mine` to confirm\n";
    }
    return kExitValid;
}

int cmd_verify(const std::string& receipt_path, const std::string& chain_path,
               const std::string& issuer_url, bool as_json, std::int64_t now) {
    MerkleReceipt receipt = load_receipt(receipt_path);
    if (!issuer_url.empty()) {
        receipt.issuer_profile_url = issuer_url;
    }
    const SimulatedChain chain(chain_path);
    HttpIssuerFetcher fetcher;
    const auto report = verify_credential(receipt, chain, fetcher, now);
    std::cout << render_report(report, as_json ? ReportFormat::json : ReportFormat::text);
    if (as_json) std::cout << "\n";
    return report.valid ? kExitValid : kExitInvalid;
}

int cmd_revoke(const std::string& store_dir, const std::string& target,
               const std::string& reason, std::int64_t at) {
    auto store = IssuerStore::open(store_dir);
    const auto result = store.revoke(target, reason, at);
    if (!result.newly_added) {
        std::cout << "warning: \"" << target << "\" is already revoked; list unchanged\n";
    }
    std::cout << canonicalize(result.list.to_json()) << "\n";
    return kExitValid;
}

int cmd_serve(const std::string& store_dir, const std::string& host, int port) {
    IssuerService service(store_dir, host, port);
    std::cout << "serving issuer documents at " << service.base_url() << "\n"
              << "  " << service.base_url() << "/issuer/profile.json\n"
              << "  " << service.base_url() << "/issuer/revocations.json\n"
              << std::flush;
    service.wait();
    return kExitValid;
}

int cmd_chain_mine(const std::string& chain_path, std::int64_t timestamp,
                   std::int64_t fee_rate) {
    SimulatedChain chain(chain_path, fee_rate);
    const auto block = chain.mine_block(timestamp);
    std::cout << "mined block height " << block.height << " hash " << block.block_hash.hex()
              << " with " << block.tx_ids.size() << " transaction(s)\n";
    return kExitValid;
}

int cmd_chain_show(const std::string& chain_path) {
    const SimulatedChain chain(chain_path);
    const auto blocks = chain.blocks();
    const auto txs = chain.transactions();
    std::cout << "blocks: " << blocks.size() << ", transactions: " << txs.size()
              << " (" << chain.pending_count() << " pending)\n";
    for (const auto& b : blocks) {
        std::cout << "block " << b.height << " hash " << b.block_hash.hex() << " txs "
                  << b.tx_ids.size() << " timestamp " << b.timestamp << "\n";
    }
    for (const auto& tx : txs) {
        std::cout << "tx " << tx.tx_id.hex() << " anchor " << tx.anchor_payload.hex()
                  << " size " << tx.size_bytes << " fee " << tx.fee_paid;
        if (tx.block_height) {
            std::cout << " height " << *tx.block_height;
        } else {
            std::cout << " unconfirmed";
        }
        std::cout << "\n";
    }
    return kExitValid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anchor academic credential batches in a (simulated) blockchain "
                 "and verify the receipts"};
    app.require_subcommand(1);
    int exit_code = kExitValid;

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate an issuer signing key pair");
    std::string keygen_out;
    keygen->add_option("--out", keygen_out, "output path prefix (<prefix>.pub, <prefix>.key)")
        ->required();
    keygen->callback([&] { exit_code = cmd_keygen(keygen_out); });

    // init
    auto* init = app.add_subcommand("init", "initialize an issuer store directory");
    std::string init_store, init_id, init_name, init_key, init_url;
    std::int64_t init_created = now_seconds();
    init->add_option("--store", init_store, "issuer store directory")
        ->envname("CREDANCHOR_ISSUER")->required();
    init->add_option("--issuer-id", init_id, "issuer identifier")->required();
    init->add_option("--name", init_name, "issuer display name")->required();
    init->add_option("--public-key", init_key, "issuer public key (hex or path to .pub file)")
        ->required();
    init->add_option("--base-url", init_url,
                     "base URL where the issuer documents will be served")->required();
    init->add_option("--key-created", init_created,
                     "key creation time, UTC seconds (default: now)");
    init->callback([&] {
        exit_code = cmd_init(init_store, init_id, init_name, init_key, init_url,
                             init_created);
    });

    // invite
    auto* invite = app.add_subcommand("invite", "create an invite for a recipient");
    std::string inv_store, inv_email, inv_template, inv_out;
    invite->add_option("--store", inv_store, "issuer store directory")
        ->envname("CREDANCHOR_ISSUER")->required();
    invite->add_option("--email", inv_email, "recipient email address")->required();
    invite->add_option("--template", inv_template,
                       "invite message template file ({{recipient_email}} and "
                       "{{issuer_id}} are substituted)");
    invite->add_option("--out", inv_out, "invite file to write (default: inside the store)");
    invite->callback([&] { exit_code = cmd_invite(inv_store, inv_email, inv_template, inv_out); });

    // accept
    auto* accept = app.add_subcommand("accept", "record a recipient's address for an invite");
    std::string acc_store, acc_invite, acc_address;
    accept->add_option("--store", acc_store, "issuer store directory")
        ->envname("CREDANCHOR_ISSUER")->required();
    accept->add_option("--invite", acc_invite, "invite id")->required();
    accept->add_option("--address", acc_address, "recipient blockchain address")->required();
    accept->callback([&] { exit_code = cmd_accept(acc_store, acc_invite, acc_address); });

    // issue
    auto* issue = app.add_subcommand(
        "issue", "sign a batch of credentials, anchor its merkle root, write receipts");
    std::string is_store, is_chain, is_key, is_dir, is_name, is_out;
    bool is_no_mine = false;
    std::int64_t is_fee_rate = 1;
    std::int64_t is_timestamp = now_seconds();
    issue->add_option("--store", is_store, "issuer store directory")
        ->envname("CREDANCHOR_ISSUER")->required();
    issue->add_option("--chain", is_chain, "chain store file")
        ->envname("CREDANCHOR_CHAIN")->required();
    issue->add_option("--key", is_key, "issuer private key (path to .key file or hex)")
        ->required();
    issue->add_option("--batch-dir", is_dir, "directory of credential *.json files")
        ->required();
    issue->add_option("--batch-name", is_name, "logical batch name")->required();
    issue->add_option("--out", is_out, "directory for receipt files")->required();
    issue->add_flag("--no-mine", is_no_mine,
                    "leave the anchor transaction unconfirmed (default mines one block)");
    issue->add_option("--fee-rate", is_fee_rate, "fee units per byte (default 1)");
    issue->add_option("--timestamp", is_timestamp,
                      "block timestamp when mining, UTC seconds (default: now)");
    issue->callback([&] {
        exit_code = cmd_issue(is_store, is_chain, is_key, is_dir, is_name, is_out,
                              is_no_mine, is_fee_rate, is_timestamp);
    });

    // verify
    auto* verify = app.add_subcommand("verify", "verify a receipt file");
    std::string v_receipt, v_chain, v_url;
    bool v_json = false;
    std::int64_t v_now = now_seconds();
    verify->add_option("receipt", v_receipt, "receipt file")->required();
    verify->add_option("--chain", v_chain, "chain store file")
        ->envname("CREDANCHOR_CHAIN")->required();
    verify->add_option("--issuer-url", v_url,
                       "override the issuer profile URL in the receipt");
    verify->add_flag("--json", v_json, "emit the report as JSON");
    verify->add_option("--now", v_now, "verification time, UTC seconds (default: now)");
    verify->callback([&] { exit_code = cmd_verify(v_receipt, v_chain, v_url, v_json, v_now); });

    // revoke
    auto* revoke = app.add_subcommand("revoke", "revoke a credential id or a whole batch");
    std::string r_store, r_target, r_reason;
    std::int64_t r_at = now_seconds();
    revoke->add_option("--store", r_store, "issuer store directory")
        ->envname("CREDANCHOR_ISSUER")->required();
    revoke->add_option("--target", r_target, "credential id or batch name")->required();
    revoke->add_option("--reason", r_reason, "reason recorded in the list")->required();
    revoke->add_option("--at", r_at, "revocation time, UTC seconds (default: now)");
    revoke->callback([&] { exit_code = cmd_revoke(r_store, r_target, r_reason, r_at); });

    // serve
    auto* serve = app.add_subcommand("serve", "serve the issuer profile and revocation list");
    std::string s_store, s_host = "127.0.0.1";
    int s_port = 8080;
    serve->add_option("--store", s_store, "issuer store directory")
        ->envname("CREDANCHOR_ISSUER")->required();
    serve->add_option("--host", s_host, "bind host (default 127.0.0.1)");
    serve->add_option("--port", s_port, "bind port (default 8080; 0 picks a free port)");
    serve->callback([&] { exit_code = cmd_serve(s_store, s_host, s_port); });

    // chain
    auto* chain = app.add_subcommand("chain", "inspect or advance the simulated chain");
    chain->require_subcommand(1);
    auto* mine = chain->add_subcommand("mine", "mine pending transactions into a block");
    std::string cm_chain;
    std::int64_t cm_ts = now_seconds(), cm_fee = 1;
    mine->add_option("--chain", cm_chain, "chain store file")
        ->envname("CREDANCHOR_CHAIN")->required();
    mine->add_option("--timestamp", cm_ts, "block timestamp, UTC seconds (default: now)");
    mine->add_option("--fee-rate", cm_fee, "fee units per byte (default 1)");
    mine->callback([&] { exit_code = cmd_chain_mine(cm_chain, cm_ts, cm_fee); });

    auto* show = chain->add_subcommand("show", "list blocks and transactions");
    std::string cs_chain;
    show->add_option("--chain", cs_chain, "chain store file")
        ->envname("CREDANCHOR_CHAIN")->required();
    show->callback([&] { exit_code = cmd_chain_show(cs_chain); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return exit_code;
}
