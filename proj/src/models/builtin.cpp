#include "devs/models/builtin.hpp"

#include "devs/models/ef.hpp"
#include "devs/models/jcas.hpp"

namespace devs::models {

namespace {

template <typename T>
void add(BehaviorRegistry& registry) {
    registry.register_behavior(std::string(T::kind_id),
                               [](const Record& params) { return std::make_unique<T>(params); });
}

} // namespace

void register_builtin_behaviors(BehaviorRegistry& registry) {
    add<Generator>(registry);
    add<Processor>(registry);
    add<Transducer>(registry);
    add<Acceptor>(registry);

    add<jcas::Jtac>(registry);
    add<jcas::Awacs>(registry);
    add<jcas::Caoc>(registry);
    add<jcas::Uav>(registry);
    add<jcas::UsmcAircraft>(registry);
    add<jcas::Observer>(registry);
    add<jcas::MissionLog>(registry);
}

std::shared_ptr<const BehaviorRegistry> builtin_registry() {
    auto registry = std::make_shared<BehaviorRegistry>();
    register_builtin_behaviors(*registry);
    return registry;
}

} // namespace devs::models
