#pragma once

#include <string>
#include <string_view>

namespace devs::proto {

/// Identifies a simulator on a node: the component name plus the address of
/// the user who asked for it, rendered "Processor@192.168.1.2".
struct SimulatorKey {
    std::string component;
    std::string client_address;

    std::string str() const;
    friend bool operator==(const SimulatorKey&, const SimulatorKey&) = default;
};

/// Throws reserved_delimiter if the name contains '@', invalid_argument if
/// either part is empty.
std::string render_key(std::string_view component, std::string_view client_address);

/// Throws parse_error unless the text holds exactly one '@' between two
/// non-empty parts.
SimulatorKey parse_key(std::string_view rendered);

} // namespace devs::proto
