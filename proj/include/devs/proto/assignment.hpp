#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace devs::proto {

/// Component name -> node endpoint ("host:port").
using AssignmentMap = std::map<std::string, std::string>;

/// Deals components, taken in sorted-name order, to the servers cyclically in
/// the given server order. Throws no_servers for an empty server list.
AssignmentMap round_robin_assign(std::vector<std::string> components, const std::vector<std::string>& servers);

/// Throws assignment_invalid if an endpoint is not in `servers`, and
/// assignment_incomplete naming every component of `components` left out.
void check_assignment(const AssignmentMap& assignment, const std::vector<std::string>& components,
                      const std::vector<std::string>& servers);

/// Assignment files are JSON objects {"Component": "host:port", ...}.
AssignmentMap parse_assignment(std::string_view bytes);
std::string emit_assignment(const AssignmentMap& assignment);

/// One endpoint per line; blank lines and '#' comments ignored.
std::vector<std::string> parse_server_list(std::string_view text);

} // namespace devs::proto
