#pragma once

#include "devs/core/registry.hpp"

#include <memory>

namespace devs::models {

/// Adds the experimental-frame and JCAS behaviors to `registry`.
void register_builtin_behaviors(BehaviorRegistry& registry);

/// Registry pre-populated with every built-in behavior.
std::shared_ptr<const BehaviorRegistry> builtin_registry();

} // namespace devs::models
