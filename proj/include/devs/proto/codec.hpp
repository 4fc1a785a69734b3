#pragma once

#include "devs/core/coupled.hpp"
#include "devs/core/message_bag.hpp"
#include "devs/core/payload.hpp"
#include "devs/core/time.hpp"

#include <json.hpp>

#include <string>

namespace devs::proto {

using json = nlohmann::json;

/// Payloads map onto native JSON: text <-> string, integer <-> integer
/// number, real <-> floating number, boolean <-> bool, record <-> object.
/// Arrays and null are not payloads.
json payload_to_json(const Payload& p);
Payload payload_from_json(const json& j, const std::string& where = "");

json record_to_json(const Record& r);
Record record_from_json(const json& j, const std::string& where = "");

/// Finite times are JSON numbers; +infinity is the string "inf".
json time_to_json(Time t);
Time time_from_json(const json& j, const std::string& where = "");

/// [{"port": p, "value": v}, ...] in bag order.
json bag_to_json(const MessageBag& bag);
MessageBag bag_from_json(const json& j, const std::string& where = "");

/// Self-contained component form used by newSimulator: atomic components as
/// {"name", "kind", "params"}, coupled ones as {"name", "coupled": {...}}
/// with the nested model inlined.
json component_to_json(const ComponentSpec& c);
ComponentSpec component_from_json(const json& j, const std::string& where = "");

json coupled_to_json(const CoupledSpec& spec);
CoupledSpec coupled_from_json(const json& j, const std::string& where = "");

/// "Comp.port" <-> PortRef.
std::string port_ref_to_string(const PortRef& ref);
PortRef port_ref_from_string(const std::string& s, const std::string& where = "");

/// Compact dump with sorted keys; the canonical byte form.
std::string canonical(const json& j);

} // namespace devs::proto
