#include "devs/core/error.hpp"

#include <array>
#include <utility>

namespace devs {

namespace {

constexpr std::array<std::pair<Errc, std::string_view>, 23> kNames{{
    {Errc::invalid_argument, "invalid-argument"},
    {Errc::invalid_time, "invalid-time"},
    {Errc::port_unknown, "port-unknown"},
    {Errc::unknown_behavior, "unknown-behavior"},
    {Errc::unknown_translation, "unknown-translation"},
    {Errc::invalid_parameter, "invalid-parameter"},
    {Errc::protocol_violation, "protocol-violation"},
    {Errc::not_found, "not-found"},
    {Errc::already_exists, "already-exists"},
    {Errc::reserved_delimiter, "reserved-delimiter"},
    {Errc::parse_error, "parse-error"},
    {Errc::decode_error, "decode-error"},
    {Errc::schema_error, "schema-error"},
    {Errc::validation_failed, "validation-failed"},
    {Errc::compile_error, "compile-error"},
    {Errc::no_servers, "no-servers"},
    {Errc::assignment_incomplete, "assignment-incomplete"},
    {Errc::assignment_invalid, "assignment-invalid"},
    {Errc::initialization_failure, "initialization-failure"},
    {Errc::propagation_failure, "propagation-failure"},
    {Errc::transport_error, "transport-error"},
    {Errc::upload_error, "upload-error"},
    {Errc::internal, "internal"},
}};

} // namespace

std::string_view to_string(Errc code) noexcept {
    for (const auto& [c, name] : kNames) {
        if (c == code) return name;
    }
    return "internal";
}

Errc errc_from_string(std::string_view name) noexcept {
    for (const auto& [c, n] : kNames) {
        if (n == name) return c;
    }
    return Errc::internal;
}

} // namespace devs
