#include "devs/proto/codec.hpp"

#include "json_util.hpp"

#include <cmath>
#include <limits>

namespace devs::proto {

using namespace detail;

json payload_to_json(const Payload& p) {
    switch (p.kind()) {
    case Payload::Kind::text: return p.as_text();
    case Payload::Kind::integer: return p.as_integer();
    case Payload::Kind::real: return p.as_real();
    case Payload::Kind::boolean: return p.as_boolean();
    case Payload::Kind::record: return record_to_json(p.as_record());
    }
    return nullptr;
}

Payload payload_from_json(const json& j, const std::string& where) {
    switch (j.type()) {
    case json::value_t::string: return Payload::text(j.get<std::string>());
    case json::value_t::boolean: return Payload::boolean(j.get<bool>());
    case json::value_t::number_integer: return Payload::integer(j.get<std::int64_t>());
    case json::value_t::number_unsigned: {
        const auto u = j.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            schema_fail(where, "integer out of range");
        }
        return Payload::integer(static_cast<std::int64_t>(u));
    }
    case json::value_t::number_float: {
        const double d = j.get<double>();
        if (!std::isfinite(d)) schema_fail(where, "real payload must be finite");
        return Payload::real(d);
    }
    case json::value_t::object: return Payload::record(record_from_json(j, where));
    default: schema_fail(where, "unsupported payload type '" + std::string(j.type_name()) + "'");
    }
}

json record_to_json(const Record& r) {
    json out = json::object();
    for (const auto& [k, v] : r) out[k] = payload_to_json(v);
    return out;
}

Record record_from_json(const json& j, const std::string& where) {
    expect_object(j, where);
    Record out;
    for (const auto& [k, v] : j.items()) out.emplace(k, payload_from_json(v, child(where, k)));
    return out;
}

json time_to_json(Time t) {
    if (t.is_infinite()) return "inf";
    return t.value();
}

Time time_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return Time::infinity();
        schema_fail(where, "time string must be \"inf\"");
    }
    if (!j.is_number()) schema_fail(where, "expected a time (number or \"inf\")");
    const double d = j.get<double>();
    if (!std::isfinite(d) || d < 0.0) schema_fail(where, "time must be non-negative");
    return Time(d);
}

json bag_to_json(const MessageBag& bag) {
    json out = json::array();
    for (const auto& item : bag) out.push_back(json{{"port", item.port}, {"value", payload_to_json(item.value)}});
    return out;
}

MessageBag bag_from_json(const json& j, const std::string& where) {
    expect_array(j, where);
    MessageBag bag;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = child(where, i);
        expect_object(j[i], w);
        only_keys(j[i], {"port", "value"}, w);
        std::string port = required_string(j[i], "port", w);
        if (port.empty()) schema_fail(child(w, "port"), "port must be non-empty");
        bag.add(std::move(port), payload_from_json(required_field(j[i], "value", w), child(w, "value")));
    }
    return bag;
}

std::string port_ref_to_string(const PortRef& ref) { return ref.component + "." + ref.port; }

PortRef port_ref_from_string(const std::string& s, const std::string& where) {
    const auto dot = s.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == s.size() || s.find('.', dot + 1) != std::string::npos) {
        schema_fail(where, "expected \"Component.port\", got \"" + s + "\"");
    }
    return PortRef{s.substr(0, dot), s.substr(dot + 1)};
}

namespace detail {

json couplings_to_json(const std::vector<Coupling>& couplings) {
    json out = json::array();
    for (const auto& c : couplings) {
        json e{{"from", port_ref_to_string(c.from)}, {"to", port_ref_to_string(c.to)}};
        if (c.translation != identity_translation) e["translation"] = c.translation;
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<Coupling> couplings_from_json(const json& j, const std::string& where) {
    expect_array(j, where);
    std::vector<Coupling> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = child(where, i);
        expect_object(j[i], w);
        only_keys(j[i], {"from", "to", "translation"}, w);
        Coupling c;
        c.from = port_ref_from_string(required_string(j[i], "from", w), child(w, "from"));
        c.to = port_ref_from_string(required_string(j[i], "to", w), child(w, "to"));
        if (auto* t = optional_field(j[i], "translation")) c.translation = as_string(*t, child(w, "translation"));
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace detail

json component_to_json(const ComponentSpec& c) {
    if (c.is_coupled()) return json{{"name", c.name}, {"coupled", coupled_to_json(c.coupled())}};
    return json{{"name", c.name}, {"kind", c.atomic().kind}, {"params", record_to_json(c.atomic().params)}};
}

ComponentSpec component_from_json(const json& j, const std::string& where) {
    expect_object(j, where);
    only_keys(j, {"name", "kind", "params", "coupled"}, where);
    ComponentSpec c;
    c.name = required_string(j, "name", where);
    if (auto* nested = optional_field(j, "coupled")) {
        if (optional_field(j, "kind") || optional_field(j, "params")) {
            schema_fail(where, "a component is either atomic (kind) or coupled, not both");
        }
        c.model = std::make_shared<const CoupledSpec>(coupled_from_json(*nested, child(where, "coupled")));
        return c;
    }
    AtomicModelRef ref;
    ref.kind = required_string(j, "kind", where);
    if (auto* p = optional_field(j, "params")) ref.params = record_from_json(*p, child(where, "params"));
    c.model = std::move(ref);
    return c;
}

json coupled_to_json(const CoupledSpec& spec) {
    json comps = json::array();
    for (const auto& c : spec.components) comps.push_back(component_to_json(c));
    return json{{"name", spec.name},
                {"inputs", spec.inputs},
                {"outputs", spec.outputs},
                {"components", std::move(comps)},
                {"couplings", couplings_to_json(spec.couplings)}};
}

CoupledSpec coupled_from_json(const json& j, const std::string& where) {
    expect_object(j, where);
    only_keys(j, {"name", "inputs", "outputs", "components", "couplings"}, where);
    CoupledSpec spec;
    spec.name = required_string(j, "name", where);
    if (auto* p = optional_field(j, "inputs")) spec.inputs = string_list(*p, child(where, "inputs"));
    if (auto* p = optional_field(j, "outputs")) spec.outputs = string_list(*p, child(where, "outputs"));
    const auto& comps = expect_array(required_field(j, "components", where), child(where, "components"));
    for (std::size_t i = 0; i < comps.size(); ++i) {
        spec.components.push_back(component_from_json(comps[i], child(child(where, "components"), i)));
    }
    if (auto* p = optional_field(j, "couplings")) spec.couplings = couplings_from_json(*p, child(where, "couplings"));
    return spec;
}

std::string canonical(const json& j) {
    try {
        return j.dump(-1, ' ', false, json::error_handler_t::strict);
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_argument, std::string("cannot encode: ") + e.what());
    }
}

} // namespace devs::proto
