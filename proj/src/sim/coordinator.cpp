#include "devs/sim/coordinator.hpp"

#include "devs/core/error.hpp"
#include "devs/proto/key.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <set>

namespace devs::sim {

std::vector<Route> resolve_routes(const CoupledSpec& root) {
    std::vector<Route> routes;
    for (const auto& c : root.couplings) {
        if (root.is_boundary(c.from)) continue;
        Route r;
        r.from_component = c.from.component;
        r.from_port = c.from.port;
        r.to_component = root.is_boundary(c.to) ? std::string{} : c.to.component;
        r.to_port = c.to.port;
        r.translation = c.translation;
        routes.push_back(std::move(r));
    }
    return routes;
}

Coordinator::Coordinator(std::string client_address, std::shared_ptr<const CoupledSpec> root,
                         std::map<std::string, SimulationService*> placement,
                         std::shared_ptr<const BehaviorRegistry> registry)
    : client_(std::move(client_address)),
      root_(std::move(root)),
      placement_(std::move(placement)),
      registry_(std::move(registry)) {
    require_valid(*root_, *registry_);
    std::vector<std::string> missing;
    for (const auto& comp : root_->components) {
        auto it = placement_.find(comp.name);
        if (it == placement_.end() || it->second == nullptr) {
            missing.push_back(comp.name);
            continue;
        }
        keys_.emplace(comp.name, proto::render_key(comp.name, client_));
    }
    if (!missing.empty()) {
        std::string msg = "no host assigned for:";
        for (const auto& m : missing) msg += " " + m;
        throw Error(Errc::assignment_incomplete, msg);
    }
    for (const auto& [comp, _] : keys_) order_.push_back(comp);
    std::sort(order_.begin(), order_.end(),
              [&](const std::string& a, const std::string& b) { return keys_.at(a) < keys_.at(b); });
    routes_ = resolve_routes(*root_);
}

SimulationService& Coordinator::host(const std::string& component) { return *placement_.at(component); }

void Coordinator::create_simulators() {
    for (const auto& comp : order_) {
        host(comp).new_simulator(keys_.at(comp), *root_->find(comp));
        created_.insert(comp);
    }
}

void Coordinator::initialize(Time t) {
    std::set<std::string> failed;
    std::string detail;
    for (const auto& comp : order_) {
        try {
            host(comp).initialize(keys_.at(comp), t);
        } catch (const Error& e) {
            failed.insert(host(comp).endpoint());
            detail += std::string("\n  ") + e.what();
        }
    }
    if (!failed.empty()) {
        std::string msg = "initialization failed at:";
        for (const auto& ep : failed) msg += " " + ep;
        throw Error(Errc::initialization_failure, msg + detail);
    }
    tl_ = t;
    tn_ = ta();
}

void Coordinator::lambda(Time t) {
    for (const auto& comp : order_) host(comp).lambda(keys_.at(comp), t);
}

void Coordinator::propagate_output(Time t) {
    for (const auto& comp : order_) {
        const MessageBag out = host(comp).get_output(keys_.at(comp));
        for (const auto& item : out) {
            cycle_trace_.push_back(TraceEvent{t, comp, item.port, item.value});
            for (const auto& r : routes_) {
                if (r.from_component != comp || r.from_port != item.port || r.to_component.empty()) continue;
                const Payload value = registry_->translation(r.translation)(item.value);
                try {
                    host(r.to_component).receive_input(keys_.at(r.to_component), r.from_port, value, r.to_port);
                } catch (const Error& e) {
                    throw Error(Errc::propagation_failure, "coupling " + comp + "." + r.from_port + " -> " +
                                                               r.to_component + "." + r.to_port + ": " + e.what());
                }
                ++relayed_;
            }
        }
    }
}

void Coordinator::deltfcn(Time t) {
    for (const auto& comp : order_) host(comp).deltfcn(keys_.at(comp), t);
}

Time Coordinator::ta() {
    Time t = Time::infinity();
    for (const auto& comp : order_) t = min(t, host(comp).get_tn(keys_.at(comp)));
    return t;
}

RunResult Coordinator::simulate(std::uint64_t iterations, std::optional<Time> end_time) {
    RunResult result;
    cycle_trace_.clear();
    Time t = tn_;
    try {
        for (std::uint64_t i = 0; i < iterations; ++i) {
            if (t.is_infinite()) break;
            if (end_time && t > *end_time) break;
            lambda(t);
            propagate_output(t);
            deltfcn(t);
            tl_ = t;
            tn_ = ta();
            t = tn_;
            ++result.cycles;
        }
    } catch (const Error& e) {
        result.complete = false;
        result.error = e.what();
        spdlog::warn("simulation for {} aborted after {} cycles: {}", client_, result.cycles, e.what());
    }
    result.last_time = tl_;
    result.next_time = tn_;
    result.trace = std::move(cycle_trace_);
    cycle_trace_.clear();
    return result;
}

std::map<std::string, Payload> Coordinator::collect_states() {
    std::map<std::string, Payload> out;
    for (const auto& comp : order_) out.emplace(comp, host(comp).get_state(keys_.at(comp)));
    return out;
}

void Coordinator::exit() {
    for (const auto& comp : order_) {
        if (!created_.count(comp)) continue;
        try {
            host(comp).exit(keys_.at(comp));
        } catch (const Error& e) {
            if (e.code() != Errc::not_found) {
                spdlog::warn("exit of {} at {} failed: {}", keys_.at(comp), host(comp).endpoint(), e.what());
            }
        }
    }
    order_.clear();
    created_.clear();
}

} // namespace devs::sim
