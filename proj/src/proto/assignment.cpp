#include "devs/proto/assignment.hpp"

#include "devs/core/error.hpp"
#include "devs/proto/codec.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <sstream>

namespace devs::proto {

AssignmentMap round_robin_assign(std::vector<std::string> components, const std::vector<std::string>& servers) {
    if (servers.empty()) throw Error(Errc::no_servers, "no servers to assign components to");
    std::sort(components.begin(), components.end());
    AssignmentMap out;
    for (std::size_t i = 0; i < components.size(); ++i) out[components[i]] = servers[i % servers.size()];
    return out;
}

void check_assignment(const AssignmentMap& assignment, const std::vector<std::string>& components,
                      const std::vector<std::string>& servers) {
    for (const auto& [component, endpoint] : assignment) {
        if (std::find(servers.begin(), servers.end(), endpoint) == servers.end()) {
            throw Error(Errc::assignment_invalid,
                        "component '" + component + "' assigned to unknown server '" + endpoint + "'");
        }
        if (std::find(components.begin(), components.end(), component) == components.end()) {
            throw Error(Errc::assignment_invalid, "'" + component + "' is not a top-level component");
        }
    }
    std::string missing;
    for (const auto& c : components) {
        if (assignment.count(c)) continue;
        if (!missing.empty()) missing += ", ";
        missing += c;
    }
    if (!missing.empty()) throw Error(Errc::assignment_incomplete, "unassigned components: " + missing);
}

AssignmentMap parse_assignment(std::string_view bytes) {
    json j;
    try {
        j = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw Error(Errc::parse_error, "malformed assignment at byte " + std::to_string(e.byte));
    }
    if (!j.is_object()) throw Error(Errc::parse_error, "assignment must be a JSON object");
    AssignmentMap out;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_string()) throw Error(Errc::parse_error, "assignment of '" + k + "' must be a string");
        out[k] = v.get<std::string>();
    }
    return out;
}

std::string emit_assignment(const AssignmentMap& assignment) {
    json j = json::object();
    for (const auto& [k, v] : assignment) j[k] = v;
    return j.dump(2) + "\n";
}

std::vector<std::string> parse_server_list(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(b, e - b + 1));
    }
    return out;
}

} // namespace devs::proto
