#include "credanchor/credential.hpp"

#include <fstream>

#include "credanchor/canonical.hpp"
#include "credanchor/errors.hpp"

namespace credanchor {

namespace {

std::string require_string(const nlohmann::json& doc, const char* field) {
    if (!doc.contains(field) || !doc[field].is_string()) {
        throw SchemaError(std::string("credential field \"") + field +
                          "\" is missing or not a string");
    }
    return doc[field].get<std::string>();
}

std::int64_t require_int(const nlohmann::json& doc, const char* field) {
    if (!doc.contains(field) || !doc[field].is_number_integer()) {
        throw SchemaError(std::string("credential field \"") + field +
                          "\" is missing or not an integer");
    }
    return doc[field].get<std::int64_t>();
}

}  // namespace

nlohmann::json Credential::to_json() const {
    nlohmann::json j{
        {"id", id},
        {"issuer_id", issuer_id},
        {"recipient_address", recipient_address},
        {"title", title},
        {"description", description},
        {"issued_on", issued_on},
        {"batch_name", batch_name},
    };
    if (expires) j["expires"] = *expires;
    if (signature) j["signature"] = *signature;
    return j;
}

Credential Credential::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw SchemaError("credential document must be a JSON object");
    }
    Credential c;
    c.id = require_string(doc, "id");
    c.issuer_id = require_string(doc, "issuer_id");
    c.recipient_address = require_string(doc, "recipient_address");
    c.title = require_string(doc, "title");
    c.description = require_string(doc, "description");
    c.issued_on = require_int(doc, "issued_on");
    c.batch_name = require_string(doc, "batch_name");
    if (doc.contains("expires")) c.expires = require_int(doc, "expires");
    if (doc.contains("signature")) c.signature = require_string(doc, "signature");
    return c;
}

void validate_credential(const Credential& cred) {
    if (cred.id.empty()) {
        throw CredentialError("credential id is empty");
    }
    if (cred.recipient_address.empty()) {
        throw CredentialError("credential " + cred.id + " has no recipient address");
    }
    if (cred.expires && *cred.expires <= cred.issued_on) {
        throw CredentialError("credential " + cred.id +
                              " expires before it is issued");
    }
}

std::string signing_bytes(const Credential& cred) {
    auto j = cred.to_json();
    j.erase("signature");
    return canonicalize(j);
}

Credential sign_credential(const Credential& cred, const KeyPair& key) {
    if (cred.signature) {
        throw CredentialError("credential " + cred.id + " is already signed");
    }
    Credential out = cred;
    out.signature = sign_detached(signing_bytes(cred), key);
    return out;
}

bool verify_signature(const Credential& cred, std::string_view public_key_hex) {
    if (!cred.signature) {
        throw CredentialError("credential " + cred.id + " carries no signature");
    }
    return verify_detached(signing_bytes(cred), *cred.signature, public_key_hex);
}

Digest credential_hash(const Credential& cred) {
    if (!cred.signature) {
        throw CredentialError("credential " + cred.id +
                              " is unsigned; it must be signed before hashing");
    }
    return hash_bytes(canonicalize(cred.to_json()));
}

Credential load_credential(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read credential file " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return Credential::from_json(parse_json(text));
}

void save_credential(const Credential& cred, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write credential file " + path.string());
    }
    out << canonicalize(cred.to_json()) << '\n';
}

}  // namespace credanchor
