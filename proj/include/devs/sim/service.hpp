#pragma once

#include "devs/core/coupled.hpp"
#include "devs/core/message_bag.hpp"
#include "devs/core/time.hpp"
#include "devs/sim/simulator.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace devs::sim {

/// The simulation-layer protocol a coordinator drives. Keys are rendered
/// simulator keys ("Name@client"). Implementations exist for an in-memory
/// table and for a remote node.
class SimulationService {
public:
    virtual ~SimulationService() = default;

    /// Where the simulators live; used in error reports.
    virtual std::string endpoint() const = 0;

    virtual void new_simulator(const std::string& key, const ComponentSpec& component) = 0;
    virtual void initialize(const std::string& key, Time t) = 0;
    virtual void receive_input(const std::string& key, const std::string& from_port, const Payload& value,
                               const std::string& to_port) = 0;
    virtual void lambda(const std::string& key, Time t) = 0;
    virtual void deltfcn(const std::string& key, Time t) = 0;
    virtual MessageBag get_output(const std::string& key) = 0;
    virtual Time get_tn(const std::string& key) = 0;
    virtual void exit(const std::string& key) = 0;

    /// Behavior state, for reports and diagnostics.
    virtual Payload get_state(const std::string& key) = 0;
};

/// Thread-safe in-memory table of simulators. Operations on one key are
/// serialized; distinct keys may be used concurrently.
class SimulatorTable : public SimulationService {
public:
    SimulatorTable(std::shared_ptr<const BehaviorRegistry> registry, std::string endpoint = "local");

    std::string endpoint() const override { return endpoint_; }

    void new_simulator(const std::string& key, const ComponentSpec& component) override;
    void initialize(const std::string& key, Time t) override;
    void receive_input(const std::string& key, const std::string& from_port, const Payload& value,
                       const std::string& to_port) override;
    void lambda(const std::string& key, Time t) override;
    void deltfcn(const std::string& key, Time t) override;
    MessageBag get_output(const std::string& key) override;
    Time get_tn(const std::string& key) override;
    void exit(const std::string& key) override;
    Payload get_state(const std::string& key) override;

    std::vector<std::string> keys() const;
    std::size_t size() const;

    /// Runs fn(simulator) under the key's lock. Throws not_found.
    template <typename Fn>
    decltype(auto) with(const std::string& key, Fn&& fn) {
        auto entry = find(key);
        std::lock_guard lock(entry->mutex);
        return fn(entry->sim);
    }

    const BehaviorRegistry& registry() const { return *registry_; }

private:
    struct Entry {
        explicit Entry(Simulator s);
        std::mutex mutex;
        Simulator sim;
    };

    std::shared_ptr<Entry> find(const std::string& key) const;

    std::shared_ptr<const BehaviorRegistry> registry_;
    std::string endpoint_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>, std::less<>> table_;
};

} // namespace devs::sim
