#include "devs/node/transport.hpp"

#include "devs/core/error.hpp"
#include "devs/node/node.hpp"

#include <charconv>

namespace devs::node {

proto::Envelope Transport::call(const std::string& endpoint, const std::string& path, const proto::Envelope& request) {
    proto::Envelope reply = exchange(endpoint, path, request);
    proto::throw_if_error(reply);
    return reply;
}

void LocalTransport::attach(const std::string& endpoint, Node* node) {
    std::lock_guard lock(mutex_);
    nodes_[endpoint] = node;
}

void LocalTransport::detach(const std::string& endpoint) {
    std::lock_guard lock(mutex_);
    nodes_.erase(endpoint);
}

proto::Envelope LocalTransport::exchange(const std::string& endpoint, const std::string& path,
                                         const proto::Envelope& request) {
    Node* node = nullptr;
    {
        std::lock_guard lock(mutex_);
        auto it = nodes_.find(endpoint);
        if (it != nodes_.end()) node = it->second;
    }
    if (!node) throw Error(Errc::transport_error, "cannot reach " + endpoint);
    const proto::Envelope reply = node->handle(path, proto::decode_envelope(proto::encode_envelope(request)));
    return proto::decode_envelope(proto::encode_envelope(reply));
}

std::pair<std::string, int> split_endpoint(const std::string& endpoint) {
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon == 0) {
        throw Error(Errc::invalid_argument, "endpoint '" + endpoint + "' is not host:port");
    }
    int port = 0;
    const char* first = endpoint.data() + colon + 1;
    const char* last = endpoint.data() + endpoint.size();
    auto [ptr, ec] = std::from_chars(first, last, port);
    if (ec != std::errc{} || ptr != last || port < 0 || port > 65535) {
        throw Error(Errc::invalid_argument, "endpoint '" + endpoint + "' has a bad port");
    }
    return {endpoint.substr(0, colon), port};
}

std::string endpoint_host(const std::string& endpoint) {
    const auto colon = endpoint.rfind(':');
    return colon == std::string::npos ? endpoint : endpoint.substr(0, colon);
}

} // namespace devs::node
