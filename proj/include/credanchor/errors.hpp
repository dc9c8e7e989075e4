#pragma once

#include <stdexcept>

namespace credanchor {

/// Base class for every error the library raises.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Canonical encoding rejected the document (floats, nulls, binary values).
struct CanonicalError : Error {
    using Error::Error;
};

// A signature blob that cannot even be decoded (bad hex, wrong length).
// Distinct from a well-formed signature that simply fails to verify.
struct MalformedSignature : Error {
    using Error::Error;
};

// Issuance-order misuse: hashing an unsigned credential, signing twice,
// or a credential that breaks its own field invariants.
struct CredentialError : Error {
    using Error::Error;
};

// A JSON document that parses but does not match the expected shape.
struct SchemaError : Error {
    using Error::Error;
};

struct MerkleError : Error {
    using Error::Error;
};

struct ChainError : Error {
    using Error::Error;
};

struct TxNotFound : ChainError {
    using ChainError::ChainError;
};

// Transaction exists but has not been mined yet, so it carries no anchor
// timestamp that a verifier could rely on.
struct TxUnconfirmed : ChainError {
    using ChainError::ChainError;
};

// Journal replay found a record that does not hash to its recorded id or
// breaks chain linkage.
struct CorruptStore : ChainError {
    using ChainError::ChainError;
};

struct StoreError : Error {
    using Error::Error;
};

struct IssuanceError : Error {
    using Error::Error;
};

struct ServiceError : Error {
    using Error::Error;
};

// Profile / revocation-list retrieval failures, kept distinct so the
// verifier can report a precise reason.
struct FetchError : Error {
    using Error::Error;
};

struct FetchUnreachable : FetchError {
    using FetchError::FetchError;
};

struct FetchHttpError : FetchError {
    using FetchError::FetchError;
};

struct FetchParseError : FetchError {
    using FetchError::FetchError;
};

}  // namespace credanchor
