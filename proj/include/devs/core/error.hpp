#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace devs {

// Error categories shared by every layer. The wire form of each code is the
// kebab-case name returned by to_string(), so a node error can be rethrown
// faithfully on the calling side.
enum class Errc {
    invalid_argument,
    invalid_time,
    port_unknown,
    unknown_behavior,
    unknown_translation,
    invalid_parameter,
    protocol_violation,
    not_found,
    already_exists,
    reserved_delimiter,
    parse_error,
    decode_error,
    schema_error,
    validation_failed,
    compile_error,
    no_servers,
    assignment_incomplete,
    assignment_invalid,
    initialization_failure,
    propagation_failure,
    transport_error,
    upload_error,
    internal,
};

std::string_view to_string(Errc code) noexcept;
Errc errc_from_string(std::string_view name) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace devs
