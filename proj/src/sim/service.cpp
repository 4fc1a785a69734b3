#include "devs/sim/service.hpp"

#include "devs/core/error.hpp"
#include "devs/sim/digraph.hpp"
#include "devs/sim/simulator.hpp"

namespace devs::sim {

SimulatorTable::Entry::Entry(Simulator s) : sim(std::move(s)) {}

SimulatorTable::SimulatorTable(std::shared_ptr<const BehaviorRegistry> registry, std::string endpoint)
    : registry_(std::move(registry)), endpoint_(std::move(endpoint)) {}

std::shared_ptr<SimulatorTable::Entry> SimulatorTable::find(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = table_.find(key);
    if (it == table_.end()) throw Error(Errc::not_found, "no simulator '" + key + "' at " + endpoint_);
    return it->second;
}

void SimulatorTable::new_simulator(const std::string& key, const ComponentSpec& component) {
    auto entry = std::make_shared<Entry>(Simulator(instantiate_component(component, *registry_)));
    std::lock_guard lock(mutex_);
    if (!table_.emplace(key, std::move(entry)).second) {
        throw Error(Errc::already_exists, "simulator '" + key + "' already exists at " + endpoint_);
    }
}

void SimulatorTable::initialize(const std::string& key, Time t) {
    with(key, [&](Simulator& s) { s.initialize(t); });
}

void SimulatorTable::receive_input(const std::string& key, const std::string& from_port, const Payload& value,
                                   const std::string& to_port) {
    with(key, [&](Simulator& s) { s.receive_input(from_port, value, to_port); });
}

void SimulatorTable::lambda(const std::string& key, Time t) {
    with(key, [&](Simulator& s) { s.lambda(t); });
}

void SimulatorTable::deltfcn(const std::string& key, Time t) {
    with(key, [&](Simulator& s) { s.deltfcn(t); });
}

MessageBag SimulatorTable::get_output(const std::string& key) {
    return with(key, [](Simulator& s) { return s.output(); });
}

Time SimulatorTable::get_tn(const std::string& key) {
    return with(key, [](Simulator& s) { return s.next_time(); });
}

Payload SimulatorTable::get_state(const std::string& key) {
    return with(key, [](Simulator& s) { return s.model().snapshot(); });
}

void SimulatorTable::exit(const std::string& key) {
    std::lock_guard lock(mutex_);
    if (table_.erase(key) == 0) throw Error(Errc::not_found, "no simulator '" + key + "' at " + endpoint_);
}

std::vector<std::string> SimulatorTable::keys() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [k, _] : table_) out.push_back(k);
    return out;
}

std::size_t SimulatorTable::size() const {
    std::lock_guard lock(mutex_);
    return table_.size();
}

} // namespace devs::sim
