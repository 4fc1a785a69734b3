#include "devs/node/http.hpp"

#include "devs/core/error.hpp"
#include "devs/node/node.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace devs::node {

HttpTransport::HttpTransport(std::chrono::milliseconds read_timeout) : read_timeout_(read_timeout) {}

proto::Envelope HttpTransport::exchange(const std::string& endpoint, const std::string& path,
                                        const proto::Envelope& request) {
    const auto [host, port] = split_endpoint(endpoint);
    httplib::Client client(host, port);
    client.set_connection_timeout(std::chrono::seconds(3));
    client.set_read_timeout(read_timeout_);
    client.set_write_timeout(std::chrono::seconds(30));
    auto res = client.Post(path, proto::encode_envelope(request), std::string(proto::media_type));
    if (!res) {
        throw Error(Errc::transport_error,
                    "cannot reach " + endpoint + path + ": " + httplib::to_string(res.error()));
    }
    try {
        return proto::decode_envelope(res->body);
    } catch (const Error&) {
        throw Error(Errc::transport_error,
                    endpoint + path + " answered HTTP " + std::to_string(res->status) + " without an envelope");
    }
}

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer() : impl_(std::make_unique<Impl>()) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound <= 0) throw Error(Errc::transport_error, "cannot listen on " + host + ":" + std::to_string(port));
    return bound;
}

void HttpServer::serve(Node& node) {
    for (const auto& path : Node::paths()) {
        impl_->server.Post(path, [&node, path](const httplib::Request& req, httplib::Response& res) {
            proto::Envelope request;
            try {
                request = proto::decode_envelope(req.body);
            } catch (const Error& e) {
                proto::Envelope blank;
                blank.service = path.substr(path.rfind('/') + 1);
                res.status = 400;
                res.set_content(proto::encode_envelope(
                                    proto::make_error_reply(blank, to_string(e.code()), e.what())),
                                std::string(proto::media_type));
                return;
            }
            res.set_content(proto::encode_envelope(node.handle(path, request)), std::string(proto::media_type));
        });
    }
    impl_->server.listen_after_bind();
}

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

} // namespace devs::node
