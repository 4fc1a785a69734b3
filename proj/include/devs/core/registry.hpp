#pragma once

#include "devs/core/behavior.hpp"
#include "devs/core/payload.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace devs {

using BehaviorFactory = std::function<std::unique_ptr<AtomicBehavior>(const Record& params)>;

/// Coupling value translation (the Zij of a coupled model).
using Translation = std::function<Payload(const Payload&)>;

inline constexpr std::string_view identity_translation = "identity";

/// Maps behavior kind ids to factories, and translation ids to functions.
/// Populate at startup; lookups are const and safe to share between threads
/// afterwards.
class BehaviorRegistry {
public:
    BehaviorRegistry();

    /// Re-registering an existing kind replaces it (and logs the replacement).
    void register_behavior(std::string kind, BehaviorFactory factory);
    void register_translation(std::string id, Translation fn);

    /// Fresh behavior in its initial state. Throws unknown_behavior.
    std::unique_ptr<AtomicBehavior> instantiate(std::string_view kind, const Record& params) const;

    bool contains(std::string_view kind) const;
    std::vector<std::string> kinds() const;

    bool has_translation(std::string_view id) const;
    /// Throws unknown_translation.
    const Translation& translation(std::string_view id) const;

private:
    std::map<std::string, BehaviorFactory, std::less<>> behaviors_;
    std::map<std::string, Translation, std::less<>> translations_;
};

} // namespace devs
