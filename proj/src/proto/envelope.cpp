#include "devs/proto/envelope.hpp"

#include "devs/core/error.hpp"
#include "json_util.hpp"

namespace devs::proto {

using namespace detail;

std::string encode_envelope(const Envelope& env) {
    json j = json::object();
    j["service"] = env.service;
    if (env.key) j["key"] = env.key->str();
    if (env.time) j["time"] = time_to_json(*env.time);
    j["body"] = env.body;
    if (!env.request_id.empty()) j["requestId"] = env.request_id;
    return canonical(j);
}

Envelope decode_envelope(std::string_view bytes) {
    json j;
    try {
        j = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw Error(Errc::decode_error, "malformed envelope at byte " + std::to_string(e.byte));
    }
    try {
        expect_object(j, "");
        only_keys(j, {"service", "key", "time", "body", "requestId"}, "");
        Envelope env;
        env.service = required_string(j, "service", "");
        if (auto* k = optional_field(j, "key")) {
            try {
                env.key = parse_key(as_string(*k, "/key"));
            } catch (const Error& e) {
                if (e.code() != Errc::parse_error) throw;
                schema_fail("/key", e.what());
            }
        }
        if (auto* t = optional_field(j, "time")) env.time = time_from_json(*t, "/time");
        if (auto* b = optional_field(j, "body")) env.body = expect_object(*b, "/body");
        if (auto* r = optional_field(j, "requestId")) env.request_id = as_string(*r, "/requestId");
        return env;
    } catch (const Error& e) {
        if (e.code() != Errc::schema_error) throw;
        throw Error(Errc::decode_error, e.what());
    }
}

Envelope make_reply(const Envelope& request, json result) {
    Envelope reply;
    reply.service = request.service;
    reply.key = request.key;
    reply.request_id = request.request_id;
    reply.body = result.is_object() ? std::move(result) : json{{"result", std::move(result)}};
    return reply;
}

Envelope make_error_reply(const Envelope& request, std::string_view code, std::string_view message) {
    Envelope reply;
    reply.service = request.service;
    reply.key = request.key;
    reply.request_id = request.request_id;
    reply.body = json{{"error", {{"code", std::string(code)}, {"message", std::string(message)}}}};
    return reply;
}

bool is_error(const Envelope& reply) {
    if (!reply.body.is_object()) return false;
    auto it = reply.body.find("error");
    return it != reply.body.end() && it->is_object();
}

void throw_if_error(const Envelope& reply) {
    if (!is_error(reply)) return;
    const json& err = reply.body["error"];
    std::string code = err.value("code", "internal");
    std::string message = err.value("message", "");
    throw Error(errc_from_string(code), message);
}

} // namespace devs::proto
