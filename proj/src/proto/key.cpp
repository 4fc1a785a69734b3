#include "devs/proto/key.hpp"

#include "devs/core/error.hpp"

namespace devs::proto {

std::string SimulatorKey::str() const { return render_key(component, client_address); }

std::string render_key(std::string_view component, std::string_view client_address) {
    if (component.find('@') != std::string_view::npos) {
        throw Error(Errc::reserved_delimiter, "component name '" + std::string(component) + "' contains '@'");
    }
    if (client_address.find('@') != std::string_view::npos) {
        throw Error(Errc::reserved_delimiter, "client address '" + std::string(client_address) + "' contains '@'");
    }
    if (component.empty() || client_address.empty()) {
        throw Error(Errc::invalid_argument, "simulator key parts must be non-empty");
    }
    std::string out;
    out.reserve(component.size() + client_address.size() + 1);
    out.append(component).append("@").append(client_address);
    return out;
}

SimulatorKey parse_key(std::string_view rendered) {
    const auto at = rendered.find('@');
    if (at == std::string_view::npos || at == 0 || at + 1 == rendered.size() ||
        rendered.find('@', at + 1) != std::string_view::npos) {
        throw Error(Errc::parse_error, "malformed simulator key '" + std::string(rendered) + "'");
    }
    return SimulatorKey{std::string(rendered.substr(0, at)), std::string(rendered.substr(at + 1))};
}

} // namespace devs::proto
