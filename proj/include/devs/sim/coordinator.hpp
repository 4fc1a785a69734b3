#pragma once

#include "devs/core/coupled.hpp"
#include "devs/core/time.hpp"
#include "devs/sim/service.hpp"
#include "devs/sim/trace.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace devs::sim {

struct RunResult {
    std::uint64_t cycles = 0;
    Time last_time;
    Time next_time = Time::infinity();
    std::vector<TraceEvent> trace;
    bool complete = true;
    std::string error;
};

/// Top-level coupling resolved to simulator keys.
struct Route {
    std::string from_component;
    std::string from_port;
    std::string to_component; // empty for an external output of the root
    std::string to_port;
    std::string translation;
};

/// Centralized coordinator: owns one simulator per top-level component of the
/// root model, each hosted by some SimulationService, and runs the classic
/// lambda / propagate / deltfcn cycle over them. All content between
/// simulators flows through propagate_output().
class Coordinator {
public:
    /// `placement` maps every top-level component name to its host service.
    Coordinator(std::string client_address, std::shared_ptr<const CoupledSpec> root,
                std::map<std::string, SimulationService*> placement, std::shared_ptr<const BehaviorRegistry> registry);

    /// newSimulator on every host; nested coupled components travel as
    /// coupled specs and are wrapped host side.
    void create_simulators();

    /// Initializes every simulator at t. Throws initialization_failure naming
    /// each endpoint that failed.
    void initialize(Time t);

    void lambda(Time t);
    void propagate_output(Time t);
    void deltfcn(Time t);
    /// Minimum next event time over all simulators.
    Time ta();

    /// Runs up to `iterations` cycles; stops early when the next event time
    /// is infinite or exceeds `end_time`. Host failures end the run with
    /// complete == false.
    RunResult simulate(std::uint64_t iterations, std::optional<Time> end_time = std::nullopt);

    /// Final behavior state per component (call before exit()).
    std::map<std::string, Payload> collect_states();

    /// Removes every simulator this coordinator created from its host;
    /// unreachable hosts are logged and skipped. Idempotent.
    void exit();

    Time last_time() const noexcept { return tl_; }
    Time next_time() const noexcept { return tn_; }
    std::uint64_t relayed_messages() const noexcept { return relayed_; }
    const std::vector<Route>& routes() const noexcept { return routes_; }
    const std::map<std::string, std::string>& keys() const noexcept { return keys_; }
    const std::string& client_address() const noexcept { return client_; }

private:
    SimulationService& host(const std::string& component);

    std::string client_;
    std::shared_ptr<const CoupledSpec> root_;
    std::map<std::string, SimulationService*> placement_;
    std::shared_ptr<const BehaviorRegistry> registry_;
    std::map<std::string, std::string> keys_; // component -> rendered key, iterated in key order below
    std::vector<std::string> order_;          // components sorted by key
    std::set<std::string> created_;
    std::vector<Route> routes_;
    std::vector<TraceEvent> cycle_trace_;
    Time tl_;
    Time tn_ = Time::infinity();
    std::uint64_t relayed_ = 0;
};

/// Top-level couplings of `root` as routes; external-input couplings of the
/// root are ignored (a root has no environment).
std::vector<Route> resolve_routes(const CoupledSpec& root);

} // namespace devs::sim
