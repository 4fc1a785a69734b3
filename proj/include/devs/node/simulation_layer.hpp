#pragma once

#include "devs/core/registry.hpp"
#include "devs/node/transport.hpp"
#include "devs/proto/codec.hpp"
#include "devs/proto/log_record.hpp"
#include "devs/sim/service.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace devs::node {

/// Where one output port of an RT simulator delivers, peer to peer.
struct PeerRoute {
    std::string out_port;
    std::string endpoint;
    std::string key;
    std::string in_port;
    std::string translation = std::string(identity_translation);

    friend bool operator==(const PeerRoute&, const PeerRoute&) = default;
};

proto::json route_to_json(const PeerRoute& r);
PeerRoute route_from_json(const proto::json& j);

/// One message delivered directly by a peer simulator.
struct PeerItem {
    std::string from_port;
    std::string to_port;
    Payload value;
};

proto::json items_to_json(const std::vector<PeerItem>& items);
std::vector<PeerItem> items_from_json(const proto::json& j);

struct RtOptions {
    Time observe;
    double timescale = 1.0;
    std::chrono::system_clock::time_point start_at;
    std::chrono::milliseconds grace{250};
};

struct NodeCounters {
    std::atomic<std::uint64_t> coordinator_relayed{0};
    std::atomic<std::uint64_t> peer_sent{0};
    std::atomic<std::uint64_t> peer_received{0};
    std::atomic<std::uint64_t> inputs_received{0};
};

/// The per-simulator half of a node: the simulator table plus the console
/// log kept for each client, diagnostics counters and the real-time runners.
class SimulationLayer : public sim::SimulationService {
public:
    SimulationLayer(std::shared_ptr<const BehaviorRegistry> registry, std::shared_ptr<Transport> transport,
                    std::string address);
    ~SimulationLayer() override;

    std::string endpoint() const override { return address_; }

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
    std::string get_phase(const std::string& key);

    /// Starts a fresh console log and key history for `client`.
    void begin_run(const std::string& client);
    proto::LogRecord console(const std::string& client) const;

    void install_routes(const std::string& key, std::vector<PeerRoute> routes);
    /// Runs the simulator against the wall clock on its own thread. Throws
    /// protocol_violation if the simulator was never initialized or is
    /// already running.
    void rt_start(const std::string& key, RtOptions options);
    /// Queues a peer delivery stamped with the sender's logical time.
    void peer_input(const std::string& key, Time send_time, std::vector<PeerItem> items);

    /// Removes the simulators of clients idle for longer than `max_idle`.
    /// Running RT simulators are left alone. Returns the number removed.
    std::size_t sweep_idle(std::chrono::steady_clock::duration max_idle);

    std::vector<std::string> keys() const { return table_.keys(); }
    NodeCounters& counters() noexcept { return counters_; }
    proto::json diagnostics() const;

private:
    struct Runner;

    std::shared_ptr<Runner> runner(const std::string& key) const;
    void run_rt(const std::string& key, std::shared_ptr<Runner> r);
    void rt_step(const std::string& key, Runner& r, Time t, const std::vector<PeerItem>& inputs);
    void deliver(const std::string& key, Runner& r, Time t, const MessageBag& out);
    void join_runner(const std::string& key);

    void log_transition(const std::string& key, const MessageBag& out, const std::string& phase);
    void append_log(const std::string& client, std::string line);
    void touch(const std::string& key);

    std::shared_ptr<const BehaviorRegistry> registry_;
    std::shared_ptr<Transport> transport_;
    sim::SimulatorTable table_;
    NodeCounters counters_;

    std::string address_;

    mutable std::mutex log_mutex_;
    std::map<std::string, std::vector<std::string>> logs_;
    std::map<std::string, std::vector<std::string>> created_;
    std::set<std::string> initialized_;
    std::map<std::string, std::chrono::steady_clock::time_point> last_seen_;

    mutable std::mutex rt_mutex_;
    std::map<std::string, std::shared_ptr<Runner>> runners_;
};

} // namespace devs::node
