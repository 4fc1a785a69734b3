#include "devs/core/registry.hpp"

#include "devs/core/error.hpp"

#include <spdlog/spdlog.h>

namespace devs {

BehaviorRegistry::BehaviorRegistry() {
    translations_.emplace(std::string(identity_translation), [](const Payload& p) { return p; });
}

void BehaviorRegistry::register_behavior(std::string kind, BehaviorFactory factory) {
    if (kind.empty()) {
        throw Error(Errc::invalid_argument, "behavior kind id must be non-empty");
    }
    if (behaviors_.contains(kind)) {
        spdlog::info("behavior kind '{}' re-registered; previous factory replaced", kind);
    }
    behaviors_.insert_or_assign(std::move(kind), std::move(factory));
}

void BehaviorRegistry::register_translation(std::string id, Translation fn) {
    if (id.empty()) {
        throw Error(Errc::invalid_argument, "translation id must be non-empty");
    }
    translations_.insert_or_assign(std::move(id), std::move(fn));
}

std::unique_ptr<AtomicBehavior> BehaviorRegistry::instantiate(std::string_view kind, const Record& params) const {
    auto it = behaviors_.find(kind);
    if (it == behaviors_.end()) {
        throw Error(Errc::unknown_behavior, "unknown behavior kind '" + std::string(kind) + "'");
    }
    auto behavior = it->second(params);
    if (!behavior) {
        throw Error(Errc::internal, "factory for '" + std::string(kind) + "' returned nothing");
    }
    return behavior;
}

bool BehaviorRegistry::contains(std::string_view kind) const { return behaviors_.find(kind) != behaviors_.end(); }

std::vector<std::string> BehaviorRegistry::kinds() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : behaviors_) out.push_back(k);
    return out;
}

bool BehaviorRegistry::has_translation(std::string_view id) const {
    return translations_.find(id) != translations_.end();
}

const Translation& BehaviorRegistry::translation(std::string_view id) const {
    auto it = translations_.find(id);
    if (it == translations_.end()) {
        throw Error(Errc::unknown_translation, "unknown translation '" + std::string(id) + "'");
    }
    return it->second;
}

} // namespace devs
