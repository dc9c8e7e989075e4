#include "credanchor/issuer_service.hpp"

#include <chrono>
#include <thread>

#include "httplib.h"

#include "credanchor/canonical.hpp"
#include "credanchor/errors.hpp"

namespace credanchor {

namespace {

// Splits "http://host:port/path" into client base and path.
std::pair<std::string, std::string> split_url(const std::string& url) {
    constexpr std::string_view scheme = "http://";
    if (url.rfind(scheme, 0) != 0) {
        throw FetchError("only http:// URLs are supported, got \"" + url + "\"");
    }
    const auto path_start = url.find('/', scheme.size());
    if (path_start == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string get_body(const std::string& url) {
    const auto [base, path] = split_url(url);
    httplib::Client client(base);
    client.set_connection_timeout(2, 0);
    client.set_read_timeout(5, 0);
    const auto res = client.Get(path);
    if (!res) {
        throw FetchUnreachable("could not reach " + url + ": " +
                               httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw FetchHttpError("GET " + url + " returned status " +
                             std::to_string(res->status));
    }
    return res->body;
}

nlohmann::json get_json(const std::string& url) {
    try {
        return parse_json(get_body(url));
    } catch (const CanonicalError& e) {
        throw FetchParseError("response from " + url + " is not valid JSON: " + e.what());
    }
}

}  // namespace

struct IssuerService::Impl {
    std::filesystem::path store_dir;
    std::string host;
    int port = 0;
    httplib::Server server;
    std::thread thread;
};

IssuerService::IssuerService(std::filesystem::path store_dir, const std::string& host,
                             int port)
    : impl_(std::make_unique<Impl>()) {
    impl_->store_dir = std::move(store_dir);
    impl_->host = host;

    // Fail fast on a store that will not serve.
    (void)IssuerStore::open(impl_->store_dir);

    const auto dir = impl_->store_dir;
    // Each request re-opens the store, so revocations committed after
    // startup are served without a restart.
    impl_->server.Get("/issuer/profile.json",
                      [dir](const httplib::Request&, httplib::Response& res) {
                          try {
                              const auto store = IssuerStore::open(dir);
                              res.set_content(canonicalize(store.profile().to_json()),
                                              "application/json");
                          } catch (const std::exception& e) {
                              res.status = 500;
                              res.set_content(e.what(), "text/plain");
                          }
                      });
    impl_->server.Get("/issuer/revocations.json",
                      [dir](const httplib::Request&, httplib::Response& res) {
                          try {
                              const auto store = IssuerStore::open(dir);
                              res.set_content(canonicalize(store.revocations().to_json()),
                                              "application/json");
                          } catch (const std::exception& e) {
                              res.status = 500;
                              res.set_content(e.what(), "text/plain");
                          }
                      });

    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port(host);
        if (impl_->port <= 0) {
            throw ServiceError("failed to bind to " + host);
        }
    } else {
        if (!impl_->server.bind_to_port(host, port)) {
            throw ServiceError("failed to bind to " + host + ":" + std::to_string(port));
        }
        impl_->port = port;
    }

    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

IssuerService::~IssuerService() {
    stop();
}

int IssuerService::port() const {
    return impl_->port;
}

std::string IssuerService::base_url() const {
    return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

void IssuerService::stop() {
    if (impl_->server.is_running()) {
        impl_->server.stop();
    }
    if (impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

void IssuerService::wait() {
    if (impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

IssuerProfile fetch_profile(const std::string& url) {
    return IssuerProfile::from_json(get_json(url));
}

RevocationList fetch_revocations(const std::string& url) {
    return RevocationList::from_json(get_json(url));
}

IssuerProfile HttpIssuerFetcher::fetch_profile(const std::string& url) {
    return credanchor::fetch_profile(url);
}

RevocationList HttpIssuerFetcher::fetch_revocations(const std::string& url) {
    return credanchor::fetch_revocations(url);
}

StoreIssuerFetcher::StoreIssuerFetcher(std::filesystem::path store_dir)
    : dir_(std::move(store_dir)) {}

IssuerProfile StoreIssuerFetcher::fetch_profile(const std::string&) {
    return IssuerStore::open(dir_).profile();
}

RevocationList StoreIssuerFetcher::fetch_revocations(const std::string&) {
    return IssuerStore::open(dir_).revocations();
}

}  // namespace credanchor
