#pragma once

#include "devs/core/time.hpp"
#include "devs/proto/codec.hpp"
#include "devs/proto/key.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace devs::proto {

inline constexpr std::string_view media_type = "application/json";

/// Request/response unit exchanged with a node.
///
/// Canonical byte form: compact JSON, keys sorted, absent optionals omitted.
/// decode_envelope(encode_envelope(e)) == e, and equal envelopes always encode
/// to identical bytes.
struct Envelope {
    std::string service;
    std::optional<SimulatorKey> key;
    std::optional<Time> time;
    json body = json::object();
    std::string request_id;

    friend bool operator==(const Envelope&, const Envelope&) = default;
};

std::string encode_envelope(const Envelope& env);

/// Throws decode_error; malformed JSON reports the byte offset, unknown or
/// mistyped fields report the field name.
Envelope decode_envelope(std::string_view bytes);

/// Success response for `request`, carrying `result` in the body.
Envelope make_reply(const Envelope& request, json result = json::object());
/// Error response; the body holds {"error": {"code", "message"}}.
Envelope make_error_reply(const Envelope& request, std::string_view code, std::string_view message);

bool is_error(const Envelope& reply);
/// Rethrows an error reply as devs::Error with the original code.
void throw_if_error(const Envelope& reply);

} // namespace devs::proto
