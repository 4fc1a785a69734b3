#include "devs/core/coupled.hpp"

#include "devs/core/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace devs {

bool operator==(const ComponentSpec& a, const ComponentSpec& b) {
    if (a.name != b.name || a.model.index() != b.model.index()) return false;
    if (!a.is_coupled()) return a.atomic() == b.atomic();
    return a.coupled() == b.coupled();
}

const ComponentSpec* CoupledSpec::find(std::string_view component) const {
    auto it = std::find_if(components.begin(), components.end(),
                           [&](const ComponentSpec& c) { return c.name == component; });
    return it == components.end() ? nullptr : &*it;
}

std::vector<std::string> CoupledSpec::component_names() const {
    std::vector<std::string> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.name);
    return out;
}

std::string_view to_string(Violation::Kind kind) noexcept {
    switch (kind) {
    case Violation::Kind::invalid_name: return "invalid-name";
    case Violation::Kind::duplicate_name: return "duplicate-name";
    case Violation::Kind::unknown_component: return "unknown-component";
    case Violation::Kind::unknown_port: return "unknown-port";
    case Violation::Kind::self_coupling: return "self-coupling";
    case Violation::Kind::unknown_behavior: return "unknown-behavior";
    case Violation::Kind::invalid_parameters: return "invalid-parameters";
    case Violation::Kind::unknown_translation: return "unknown-translation";
    }
    return "unknown";
}

std::string Violation::str() const {
    return std::string(to_string(kind)) + " at " + locator + ": " + detail;
}

namespace {

struct Ports {
    std::set<std::string, std::less<>> inputs;
    std::set<std::string, std::less<>> outputs;
};

bool valid_name(std::string_view name) {
    return !name.empty() && name.find_first_of(".@ \t\n") == std::string_view::npos;
}

class Validator {
public:
    explicit Validator(const BehaviorRegistry& registry) : registry_(registry) {}

    Ports check(const CoupledSpec& spec, const std::string& path) {
        const std::string here = path.empty() ? spec.name : path + "/" + spec.name;
        if (!valid_name(spec.name)) {
            add(Violation::Kind::invalid_name, here, "model name '" + spec.name + "' is empty or contains a reserved character");
        }
        check_port_list(spec.inputs, here + "/inputs");
        check_port_list(spec.outputs, here + "/outputs");

        std::map<std::string, Ports, std::less<>> ports;
        for (std::size_t i = 0; i < spec.components.size(); ++i) {
            const auto& comp = spec.components[i];
            const std::string loc = here + "/components[" + std::to_string(i) + "]";
            if (!valid_name(comp.name)) {
                add(Violation::Kind::invalid_name, loc, "component name '" + comp.name + "' is empty or contains a reserved character");
            }
            if (comp.name == spec.name) {
                add(Violation::Kind::duplicate_name, loc, "component '" + comp.name + "' shadows its enclosing model");
            }
            if (ports.contains(comp.name)) {
                add(Violation::Kind::duplicate_name, loc, "duplicate component name '" + comp.name + "'");
                continue;
            }
            ports.emplace(comp.name, component_ports(comp, here, loc));
        }

        for (std::size_t i = 0; i < spec.couplings.size(); ++i) {
            const auto& c = spec.couplings[i];
            const std::string loc = here + "/couplings[" + std::to_string(i) + "]";
            check_endpoint(spec, ports, c.from, true, loc);
            check_endpoint(spec, ports, c.to, false, loc);
            if (c.from == c.to) {
                add(Violation::Kind::self_coupling, loc, "coupling from " + c.from.str() + " to itself");
            }
            if (!registry_.has_translation(c.translation)) {
                add(Violation::Kind::unknown_translation, loc, "translation '" + c.translation + "' is not registered");
            }
        }

        Ports own;
        own.inputs.insert(spec.inputs.begin(), spec.inputs.end());
        own.outputs.insert(spec.outputs.begin(), spec.outputs.end());
        return own;
    }

    std::vector<Violation> take() { return std::move(violations_); }

private:
    void add(Violation::Kind kind, std::string locator, std::string detail) {
        violations_.push_back(Violation{kind, std::move(locator), std::move(detail)});
    }

    void check_port_list(const std::vector<std::string>& list, const std::string& loc) {
        std::set<std::string, std::less<>> seen;
        for (const auto& p : list) {
            if (!valid_name(p)) add(Violation::Kind::invalid_name, loc, "port name '" + p + "' is empty or contains a reserved character");
            if (!seen.insert(p).second) add(Violation::Kind::duplicate_name, loc, "duplicate port '" + p + "'");
        }
    }

    Ports component_ports(const ComponentSpec& comp, const std::string& here, const std::string& loc) {
        if (comp.is_coupled()) return check(comp.coupled(), here);
        const auto& ref = comp.atomic();
        if (!registry_.contains(ref.kind)) {
            add(Violation::Kind::unknown_behavior, loc, "behavior kind '" + ref.kind + "' is not registered");
            return {};
        }
        try {
            auto behavior = registry_.instantiate(ref.kind, ref.params);
            Ports p;
            p.inputs.insert(behavior->input_ports().begin(), behavior->input_ports().end());
            p.outputs.insert(behavior->output_ports().begin(), behavior->output_ports().end());
            return p;
        } catch (const Error& e) {
            add(Violation::Kind::invalid_parameters, loc, e.what());
            return {};
        }
    }

    void check_endpoint(const CoupledSpec& spec, const std::map<std::string, Ports, std::less<>>& ports,
                        const PortRef& ref, bool source, const std::string& loc) {
        if (spec.is_boundary(ref)) {
            const auto& list = source ? spec.inputs : spec.outputs;
            if (std::find(list.begin(), list.end(), ref.port) == list.end()) {
                add(Violation::Kind::unknown_port, loc,
                    std::string(source ? "model input '" : "model output '") + ref.port + "' of " + spec.name + " is not declared");
            }
            return;
        }
        auto it = ports.find(ref.component);
        if (it == ports.end()) {
            add(Violation::Kind::unknown_component, loc, "component '" + ref.component + "' is not declared");
            return;
        }
        const auto& set = source ? it->second.outputs : it->second.inputs;
        if (!set.contains(ref.port)) {
            add(Violation::Kind::unknown_port, loc,
                std::string(source ? "output '" : "input '") + ref.port + "' is not declared on " + ref.component);
        }
    }

    const BehaviorRegistry& registry_;
    std::vector<Violation> violations_;
};

} // namespace

std::vector<Violation> validate_coupled(const CoupledSpec& spec, const BehaviorRegistry& registry) {
    Validator v(registry);
    v.check(spec, "");
    return v.take();
}

void require_valid(const CoupledSpec& spec, const BehaviorRegistry& registry) {
    auto violations = validate_coupled(spec, registry);
    if (violations.empty()) return;
    std::string msg = "model '" + spec.name + "' is invalid:";
    for (const auto& v : violations) msg += "\n  " + v.str();
    throw Error(Errc::validation_failed, msg);
}

} // namespace devs
