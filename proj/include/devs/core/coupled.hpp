#pragma once

#include "devs/core/payload.hpp"
#include "devs/core/registry.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace devs {

struct AtomicModelRef {
    std::string kind;
    Record params;

    friend bool operator==(const AtomicModelRef&, const AtomicModelRef&) = default;
};

struct CoupledSpec;

/// One entry of a coupled model's component set D.
struct ComponentSpec {
    std::string name;
    std::variant<AtomicModelRef, std::shared_ptr<const CoupledSpec>> model;

    bool is_coupled() const noexcept { return model.index() == 1; }
    const AtomicModelRef& atomic() const { return std::get<0>(model); }
    const CoupledSpec& coupled() const { return *std::get<1>(model); }

    friend bool operator==(const ComponentSpec& a, const ComponentSpec& b);
};

/// A coupling endpoint. A component equal to the enclosing model's name
/// denotes that model's own external port.
struct PortRef {
    std::string component;
    std::string port;

    std::string str() const { return component + "." + port; }
    friend bool operator==(const PortRef&, const PortRef&) = default;
};

struct Coupling {
    PortRef from;
    PortRef to;
    std::string translation = std::string(identity_translation);

    friend bool operator==(const Coupling&, const Coupling&) = default;
};

/// Coupled model: external ports, ordered components, and couplings covering
/// external-input, internal and external-output connections.
struct CoupledSpec {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<ComponentSpec> components;
    std::vector<Coupling> couplings;

    const ComponentSpec* find(std::string_view component) const;
    std::vector<std::string> component_names() const;
    bool is_boundary(const PortRef& ref) const { return ref.component == name; }

    friend bool operator==(const CoupledSpec&, const CoupledSpec&) = default;
};

struct Violation {
    enum class Kind {
        invalid_name,
        duplicate_name,
        unknown_component,
        unknown_port,
        self_coupling,
        unknown_behavior,
        invalid_parameters,
        unknown_translation,
    };

    Kind kind;
    std::string locator;
    std::string detail;

    std::string str() const;
};

std::string_view to_string(Violation::Kind kind) noexcept;

/// All invariant violations of the coupled model (recursing into nested coupled
/// components). Empty iff the model is well formed and every behavior kind
/// resolves in the registry.
std::vector<Violation> validate_coupled(const CoupledSpec& spec, const BehaviorRegistry& registry);

/// Throws validation_failed summarizing the violations, if any.
void require_valid(const CoupledSpec& spec, const BehaviorRegistry& registry);

} // namespace devs
