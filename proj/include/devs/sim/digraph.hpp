#pragma once

#include "devs/core/behavior.hpp"
#include "devs/core/coupled.hpp"
#include "devs/core/registry.hpp"

#include <memory>

namespace devs::sim {

/// Presents a coupled model through the atomic interface (closure under
/// coupling). The returned behavior runs a nested simulation of the
/// components; its ports are the coupled model's external ports. Nested
/// coupled components are wrapped recursively. Throws validation_failed if
/// the coupled model is malformed.
std::unique_ptr<AtomicBehavior> digraph_to_atomic(const CoupledSpec& spec, const BehaviorRegistry& registry);

/// Atomic components come from the registry, coupled ones are wrapped.
std::unique_ptr<AtomicBehavior> instantiate_component(const ComponentSpec& component,
                                                      const BehaviorRegistry& registry);

} // namespace devs::sim
