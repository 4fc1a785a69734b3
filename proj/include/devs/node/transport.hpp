#pragma once

#include "devs/proto/envelope.hpp"

#include <map>
#include <mutex>
#include <string>

namespace devs::node {

class Node;

/// Request/response channel between nodes (and from clients to nodes).
class Transport {
public:
    virtual ~Transport() = default;

    /// Sends `request` to `path` on `endpoint` and returns the reply, which
    /// may be an error reply. Throws transport_error if the endpoint cannot
    /// be reached.
    virtual proto::Envelope exchange(const std::string& endpoint, const std::string& path,
                                     const proto::Envelope& request) = 0;

    /// exchange() that rethrows error replies.
    proto::Envelope call(const std::string& endpoint, const std::string& path, const proto::Envelope& request);
};

/// Delivers requests to nodes living in the same process. Every request and
/// reply goes through the canonical byte form, as it would over the network.
class LocalTransport : public Transport {
public:
    void attach(const std::string& endpoint, Node* node);
    void detach(const std::string& endpoint);

    proto::Envelope exchange(const std::string& endpoint, const std::string& path,
                             const proto::Envelope& request) override;

private:
    std::mutex mutex_;
    std::map<std::string, Node*> nodes_;
};

/// "host:port" split; throws invalid_argument.
std::pair<std::string, int> split_endpoint(const std::string& endpoint);

/// Host part of an endpoint, or the whole string when there is no port.
std::string endpoint_host(const std::string& endpoint);

} // namespace devs::node
