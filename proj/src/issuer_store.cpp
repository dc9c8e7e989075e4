#include "credanchor/issuer_store.hpp"

#include <algorithm>
#include <fstream>

#include "credanchor/canonical.hpp"
#include "credanchor/errors.hpp"

namespace credanchor {

namespace {

constexpr const char* kIssuerFile = "issuer.json";
constexpr const char* kInvitesFile = "invites.json";
constexpr const char* kBindingsFile = "bindings.json";
constexpr const char* kBatchesFile = "batches.json";
constexpr const char* kRevocationsFile = "revocations.json";

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StoreError("cannot read " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    try {
        return parse_json(text);
    } catch (const CanonicalError& e) {
        throw StoreError(path.string() + ": " + e.what());
    }
}

// Pretty-printed so the store stays readable in a text editor.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw StoreError("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
}

nlohmann::json key_to_json(const IssuerKey& k) {
    nlohmann::json j{{"key", k.key}, {"created", k.created}};
    if (k.expires) j["expires"] = *k.expires;
    if (k.revoked) j["revoked"] = *k.revoked;
    return j;
}

IssuerKey key_from_json(const nlohmann::json& doc) {
    IssuerKey k;
    k.key = doc.at("key").get<std::string>();
    k.created = doc.at("created").get<std::int64_t>();
    if (doc.contains("expires")) k.expires = doc["expires"].get<std::int64_t>();
    if (doc.contains("revoked")) k.revoked = doc["revoked"].get<std::int64_t>();
    return k;
}

std::string substitute(std::string text, std::string_view placeholder,
                       std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

}  // namespace

bool IssuerKey::valid_at(std::int64_t ts) const {
    if (ts < created) return false;
    if (expires && ts >= *expires) return false;
    if (revoked && ts >= *revoked) return false;
    return true;
}

nlohmann::json IssuerProfile::to_json() const {
    nlohmann::json keys = nlohmann::json::array();
    for (const auto& k : public_keys) keys.push_back(key_to_json(k));
    return nlohmann::json{
        {"issuer_id", issuer_id},
        {"name", name},
        {"public_keys", std::move(keys)},
        {"revocation_list_url", revocation_list_url},
    };
}

IssuerProfile IssuerProfile::from_json(const nlohmann::json& doc) {
    IssuerProfile p;
    try {
        p.issuer_id = doc.at("issuer_id").get<std::string>();
        p.name = doc.at("name").get<std::string>();
        p.revocation_list_url = doc.at("revocation_list_url").get<std::string>();
        for (const auto& k : doc.at("public_keys")) {
            p.public_keys.push_back(key_from_json(k));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("issuer profile: ") + e.what());
    }
    if (p.public_keys.empty()) {
        throw SchemaError("issuer profile lists no public keys");
    }
    for (const auto& k : p.public_keys) {
        if ((k.expires && *k.expires <= k.created) ||
            (k.revoked && *k.revoked <= k.created)) {
            throw SchemaError("issuer key " + k.key +
                              " expires or is revoked before its creation time");
        }
    }
    return p;
}

nlohmann::json Invite::to_json() const {
    return nlohmann::json{
        {"invite_id", invite_id},
        {"issuer_id", issuer_id},
        {"recipient_email", recipient_email},
        {"message", message},
    };
}

Invite Invite::from_json(const nlohmann::json& doc) {
    try {
        return Invite{
            doc.at("invite_id").get<std::string>(),
            doc.at("issuer_id").get<std::string>(),
            doc.at("recipient_email").get<std::string>(),
            doc.at("message").get<std::string>(),
        };
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("invite: ") + e.what());
    }
}

bool RevocationList::revokes(const std::string& credential_id,
                             const std::string& batch_name) const {
    return entry_for(credential_id, batch_name) != nullptr;
}

const RevocationEntry* RevocationList::entry_for(const std::string& credential_id,
                                                 const std::string& batch_name) const {
    for (const auto& e : entries) {
        if (e.target == credential_id || e.target == batch_name) return &e;
    }
    return nullptr;
}

nlohmann::json RevocationList::to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& e : entries) {
        list.push_back({{"target", e.target},
                        {"reason", e.reason},
                        {"revoked_at", e.revoked_at}});
    }
    return nlohmann::json{{"issuer_id", issuer_id}, {"entries", std::move(list)}};
}

RevocationList RevocationList::from_json(const nlohmann::json& doc) {
    RevocationList list;
    try {
        list.issuer_id = doc.at("issuer_id").get<std::string>();
        for (const auto& e : doc.at("entries")) {
            list.entries.push_back({e.at("target").get<std::string>(),
                                    e.at("reason").get<std::string>(),
                                    e.at("revoked_at").get<std::int64_t>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("revocation list: ") + e.what());
    }
    return list;
}

IssuerStore IssuerStore::init(const std::filesystem::path& dir, std::string issuer_id,
                              std::string display_name, std::string public_key_hex,
                              std::int64_t key_created, std::string base_url) {
    if (std::filesystem::exists(dir / kIssuerFile)) {
        throw StoreError("issuer store already initialized at " + dir.string());
    }
    std::filesystem::create_directories(dir / "receipts");
    while (!base_url.empty() && base_url.back() == '/') base_url.pop_back();

    IssuerStore store;
    store.dir_ = dir;
    store.issuer_id_ = std::move(issuer_id);
    store.name_ = std::move(display_name);
    store.base_url_ = std::move(base_url);
    store.keys_.push_back(IssuerKey{std::move(public_key_hex), key_created, {}, {}});
    store.revocations_.issuer_id = store.issuer_id_;
    store.save_issuer();
    store.save_invites();
    store.save_bindings();
    store.save_batches();
    store.save_revocations();
    return store;
}

IssuerStore IssuerStore::open(const std::filesystem::path& dir) {
    IssuerStore store;
    store.dir_ = dir;
    store.load();
    return store;
}

void IssuerStore::load() {
    const auto issuer = read_json_file(dir_ / kIssuerFile);
    try {
        issuer_id_ = issuer.at("issuer_id").get<std::string>();
        name_ = issuer.at("name").get<std::string>();
        base_url_ = issuer.at("base_url").get<std::string>();
        keys_.clear();
        for (const auto& k : issuer.at("public_keys")) keys_.push_back(key_from_json(k));
    } catch (const nlohmann::json::exception& e) {
        throw StoreError(dir_.string() + "/issuer.json: " + e.what());
    }

    invites_.clear();
    for (const auto& doc : read_json_file(dir_ / kInvitesFile)) {
        invites_.push_back(Invite::from_json(doc));
    }
    bindings_.clear();
    for (const auto& doc : read_json_file(dir_ / kBindingsFile)) {
        bindings_.push_back({doc.at("invite_id").get<std::string>(),
                             doc.at("recipient_address").get<std::string>()});
    }
    batches_.clear();
    for (const auto& doc : read_json_file(dir_ / kBatchesFile)) {
        BatchRecord b;
        b.batch_name = doc.at("batch_name").get<std::string>();
        b.merkle_root = Digest::from_hex(doc.at("merkle_root").get<std::string>());
        b.tx_id = Digest::from_hex(doc.at("tx_id").get<std::string>());
        for (const auto& id : doc.at("credential_ids")) {
            b.credential_ids.push_back(id.get<std::string>());
        }
        batches_.push_back(std::move(b));
    }
    revocations_ = RevocationList::from_json(read_json_file(dir_ / kRevocationsFile));
}

void IssuerStore::save_issuer() const {
    nlohmann::json keys = nlohmann::json::array();
    for (const auto& k : keys_) keys.push_back(key_to_json(k));
    write_json_file(dir_ / kIssuerFile, {{"issuer_id", issuer_id_},
                                         {"name", name_},
                                         {"base_url", base_url_},
                                         {"public_keys", std::move(keys)}});
}

void IssuerStore::save_invites() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& inv : invites_) list.push_back(inv.to_json());
    write_json_file(dir_ / kInvitesFile, list);
}

void IssuerStore::save_bindings() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& b : bindings_) {
        list.push_back({{"invite_id", b.invite_id},
                        {"recipient_address", b.recipient_address}});
    }
    write_json_file(dir_ / kBindingsFile, list);
}

void IssuerStore::save_batches() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& b : batches_) {
        nlohmann::json ids = nlohmann::json::array();
        for (const auto& id : b.credential_ids) ids.push_back(id);
        list.push_back({{"batch_name", b.batch_name},
                        {"merkle_root", b.merkle_root.hex()},
                        {"tx_id", b.tx_id.hex()},
                        {"credential_ids", std::move(ids)}});
    }
    write_json_file(dir_ / kBatchesFile, list);
}

void IssuerStore::save_revocations() const {
    write_json_file(dir_ / kRevocationsFile, revocations_.to_json());
}

std::string IssuerStore::profile_url() const {
    return base_url_ + "/issuer/profile.json";
}

std::string IssuerStore::revocations_url() const {
    return base_url_ + "/issuer/revocations.json";
}

IssuerProfile IssuerStore::profile() const {
    return IssuerProfile{issuer_id_, name_, keys_, revocations_url()};
}

std::filesystem::path IssuerStore::receipts_dir() const {
    return dir_ / "receipts";
}

void IssuerStore::set_key_revoked(const std::string& public_key_hex,
                                  std::int64_t revoked_at) {
    const auto it = std::find_if(keys_.begin(), keys_.end(),
                                 [&](const IssuerKey& k) { return k.key == public_key_hex; });
    if (it == keys_.end()) {
        throw StoreError("no such issuer key: " + public_key_hex);
    }
    it->revoked = revoked_at;
    save_issuer();
}

void IssuerStore::set_base_url(std::string base_url) {
    while (!base_url.empty() && base_url.back() == '/') base_url.pop_back();
    base_url_ = std::move(base_url);
    save_issuer();
}

Invite IssuerStore::create_invite(const std::string& recipient_email,
                                  const std::string& message_template) {
    if (message_template.empty()) {
        throw IssuanceError("invite template is empty");
    }
    const bool duplicate =
        std::any_of(invites_.begin(), invites_.end(), [&](const Invite& inv) {
            return inv.recipient_email == recipient_email;
        });
    if (duplicate) {
        throw IssuanceError("an invite for " + recipient_email + " already exists");
    }
    Invite inv;
    inv.invite_id =
        "inv-" + hash_bytes(issuer_id_ + "\n" + recipient_email).hex().substr(0, 16);
    inv.issuer_id = issuer_id_;
    inv.recipient_email = recipient_email;
    inv.message = substitute(substitute(message_template, "{{recipient_email}}",
                                        recipient_email),
                             "{{issuer_id}}", issuer_id_);
    invites_.push_back(inv);
    save_invites();
    return inv;
}

IntroductionResponse IssuerStore::accept_invite(const std::string& invite_id,
                                                const std::string& recipient_address) {
    if (recipient_address.empty()) {
        throw IssuanceError("recipient address is empty");
    }
    if (!invite(invite_id)) {
        throw IssuanceError("unknown invite: " + invite_id);
    }
    if (binding(invite_id)) {
        throw IssuanceError("invite " + invite_id + " was already answered");
    }
    IntroductionResponse resp{invite_id, recipient_address};
    bindings_.push_back(resp);
    save_bindings();
    return resp;
}

std::vector<Invite> IssuerStore::invites() const {
    return invites_;
}

std::optional<Invite> IssuerStore::invite(const std::string& invite_id) const {
    for (const auto& inv : invites_) {
        if (inv.invite_id == invite_id) return inv;
    }
    return std::nullopt;
}

std::optional<IntroductionResponse> IssuerStore::binding(const std::string& invite_id) const {
    for (const auto& b : bindings_) {
        if (b.invite_id == invite_id) return b;
    }
    return std::nullopt;
}

std::optional<std::string> IssuerStore::address_for_email(const std::string& email) const {
    for (const auto& inv : invites_) {
        if (inv.recipient_email != email) continue;
        if (const auto b = binding(inv.invite_id)) return b->recipient_address;
    }
    return std::nullopt;
}

void IssuerStore::record_batch(const BatchRecord& batch) {
    // Re-running a batch name replaces the record; receipts from the earlier
    // run keep verifying against their own transaction.
    std::erase_if(batches_,
                  [&](const BatchRecord& b) { return b.batch_name == batch.batch_name; });
    batches_.push_back(batch);
    save_batches();
}

std::optional<BatchRecord> IssuerStore::batch(const std::string& batch_name) const {
    for (const auto& b : batches_) {
        if (b.batch_name == batch_name) return b;
    }
    return std::nullopt;
}

bool IssuerStore::known_credential(const std::string& credential_id) const {
    for (const auto& b : batches_) {
        if (std::find(b.credential_ids.begin(), b.credential_ids.end(), credential_id) !=
            b.credential_ids.end()) {
            return true;
        }
    }
    return false;
}

RevokeResult IssuerStore::revoke(const std::string& target, const std::string& reason,
                                 std::int64_t at) {
    const bool already =
        std::any_of(revocations_.entries.begin(), revocations_.entries.end(),
                    [&](const RevocationEntry& e) { return e.target == target; });
    if (already) {
        return RevokeResult{revocations_, false};
    }
    if (!batch(target) && !known_credential(target)) {
        throw IssuanceError("unknown revocation target: " + target);
    }
    revocations_.entries.push_back({target, reason, at});
    save_revocations();
    return RevokeResult{revocations_, true};
}

RevocationList IssuerStore::revocations() const {
    return revocations_;
}

}  // namespace credanchor
