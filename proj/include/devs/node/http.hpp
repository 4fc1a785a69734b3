#pragma once

#include "devs/node/transport.hpp"

#include <chrono>
#include <memory>
#include <string>

namespace devs::node {

/// Envelopes as JSON bodies of HTTP POST requests.
class HttpTransport : public Transport {
public:
    explicit HttpTransport(std::chrono::milliseconds read_timeout = std::chrono::minutes(5));

    proto::Envelope exchange(const std::string& endpoint, const std::string& path,
                             const proto::Envelope& request) override;

private:
    std::chrono::milliseconds read_timeout_;
};

/// Serves a node's endpoints over HTTP.
class HttpServer {
public:
    HttpServer();
    ~HttpServer();

    /// Binds the listening socket; port 0 picks a free port. Returns the
    /// bound port. Throws transport_error.
    int bind(const std::string& host, int port);

    /// Serves `node` on the bound socket; blocks until stop() is called.
    void serve(Node& node);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace devs::node
