#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "credanchor/issuer_store.hpp"
#include "credanchor/verification.hpp"

namespace credanchor {

/// HTTP server exposing an issuer store's public documents:
///
///   GET /issuer/profile.json      -> IssuerProfile
///   GET /issuer/revocations.json  -> RevocationList
///
/// Both are public by design, served as canonical JSON with no caching, so a
/// revocation committed to the store is visible on the very next request.
class IssuerService {
public:
    /// Binds and starts serving. Port 0 picks a free port. Throws
    /// ServiceError on bind failure, StoreError if the store is unreadable.
    IssuerService(std::filesystem::path store_dir, const std::string& host, int port);
    ~IssuerService();

    IssuerService(const IssuerService&) = delete;
    IssuerService& operator=(const IssuerService&) = delete;

    [[nodiscard]] int port() const;
    [[nodiscard]] std::string base_url() const;

    void stop();
    /// Blocks until the service is stopped (or the process is killed).
    void wait();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// GETs and parses the profile. Unreachable hosts, non-200 responses, bodies
/// that fail to parse and schema violations each raise a distinct error.
IssuerProfile fetch_profile(const std::string& url);
RevocationList fetch_revocations(const std::string& url);

/// Production fetcher: plain HTTP GETs against the URLs in the receipt and
/// profile.
class HttpIssuerFetcher final : public IssuerFetcher {
public:
    IssuerProfile fetch_profile(const std::string& url) override;
    RevocationList fetch_revocations(const std::string& url) override;
};

/// In-process fetcher reading an issuer store directly; URLs are ignored.
/// Re-opens the store per call so it sees writes immediately, same as the
/// HTTP path.
class StoreIssuerFetcher final : public IssuerFetcher {
public:
    explicit StoreIssuerFetcher(std::filesystem::path store_dir);
    IssuerProfile fetch_profile(const std::string& url) override;
    RevocationList fetch_revocations(const std::string& url) override;

private:
    std::filesystem::path dir_;
};

}  // namespace credanchor
