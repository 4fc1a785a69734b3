#pragma once

#include "devs/core/registry.hpp"

// Entry point a behavior plugin exports for `devs-node --plugin`. The node
// resolves devs symbols for the plugin, so plugins include headers only and
// link no devs libraries.
extern "C" void devs_register(devs::BehaviorRegistry& registry);
