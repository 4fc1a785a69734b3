#pragma once

#include "devs/core/registry.hpp"
#include "devs/node/node.hpp"
#include "devs/node/transport.hpp"
#include "devs/proto/assignment.hpp"
#include "devs/proto/log_record.hpp"
#include "devs/proto/manifest.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace devs::client {

enum class Mode { centralized, real_time };

struct ClientConfig {
    std::vector<std::string> servers;
    std::string manifest_path;
    /// "auto" for round-robin, otherwise the path of an assignment file.
    std::string assign = "auto";
    Mode mode = Mode::centralized;
    std::uint64_t iterations = 0;
    double observe_seconds = 0.0;
    std::optional<double> end_time;
    double timescale = 1.0;
    bool stable_output = false;
    /// Empty means detect.
    std::string client_address;
};

struct PhaseStatus {
    std::string phase;
    std::string endpoint;
    bool ok = false;
    std::string message;
};

struct NodeOutput {
    std::string endpoint;
    bool available = false;
    proto::LogRecord log;
    std::string error;
};

struct SimulationReport {
    std::string client_address;
    std::string package_name;
    std::string mode;
    std::vector<std::string> components;
    proto::AssignmentMap assignment;
    std::vector<std::string> servers;
    std::vector<PhaseStatus> phases;
    std::vector<NodeOutput> per_node;
    bool completed = false;
    std::string failure;
    std::uint64_t iterations = 0;
    double observe_seconds = 0.0;
    std::vector<std::string> trace;
    proto::json final_states = proto::json::object();
    std::uint64_t relayed = 0;
};

/// Upload, compile and simulate through the first server, then collect every
/// node's console. Phase failures are reported, not thrown; only a config
/// that cannot be used at all (unreadable manifest, bad assignment) throws.
SimulationReport run(const ClientConfig& config, node::Transport& transport);

/// Round-robin over the top-level components for "auto", otherwise the
/// checked contents of the assignment file.
proto::AssignmentMap plan_assignment(const ClientConfig& config, const proto::ModelManifest& manifest);

/// One entry per distinct server, in server-list order; unreachable nodes
/// yield an unavailable entry.
std::vector<NodeOutput> fetch_logs(const ClientConfig& config, node::Transport& transport,
                                   const std::string& client_address);

/// Endpoints become node1..N (server-list order) and the client address
/// becomes "client".
SimulationReport stabilize(SimulationReport report);

std::string render_text(const SimulationReport& report);
proto::json render_json(const SimulationReport& report);

/// Address of the local interface that routes to `endpoint`'s host.
std::string detect_client_address(const std::string& endpoint);

/// Nodes living in this process, one per distinct server endpoint, wired
/// together through a LocalTransport.
class InProcessCluster {
public:
    InProcessCluster(const std::vector<std::string>& servers, std::shared_ptr<const BehaviorRegistry> registry);
    ~InProcessCluster();

    node::Transport& transport() { return *transport_; }
    node::Node& node(const std::string& endpoint);

private:
    std::shared_ptr<node::LocalTransport> transport_;
    std::vector<std::unique_ptr<node::Node>> nodes_;
};

} // namespace devs::client
