#pragma once

#include "devs/core/registry.hpp"
#include "devs/node/simulation_layer.hpp"
#include "devs/node/transport.hpp"
#include "devs/proto/envelope.hpp"
#include "devs/proto/manifest.hpp"

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace devs::node {

struct NodeConfig {
    /// Advertised "host:port"; also how peers and the main server name us.
    std::string address;
    std::shared_ptr<const BehaviorRegistry> registry;
    std::shared_ptr<Transport> transport;
    /// Simulators of a client untouched for this long are removed; zero
    /// disables the sweep.
    std::chrono::milliseconds idle_timeout = std::chrono::minutes(10);
    /// Real-time runs start this far in the future so every peer is armed.
    std::chrono::milliseconds rt_start_delay{300};
};

/// A simulation node: the MainService layer (upload, compile, simulate) on
/// top of a SimulationLayer. The same node can coordinate a run, host
/// simulators for other coordinators and exchange peer messages in RT mode.
class Node {
public:
    explicit Node(NodeConfig config);
    ~Node();

    Node(const Node&) = delete;
    Node& operator=(const Node&) = delete;

    /// Handles one request. Failures come back as error replies, never as
    /// exceptions.
    proto::Envelope handle(std::string_view path, const proto::Envelope& request);

    const std::string& address() const noexcept { return config_.address; }
    SimulationLayer& layer() noexcept { return layer_; }

    static const std::vector<std::string>& paths();

private:
    struct Package {
        proto::ModelManifest manifest;
        std::uint64_t revision = 0;
        bool compiled = false;
        std::string ns;
    };

    proto::json dispatch(std::string_view path, const proto::Envelope& request);

    proto::json upload(const proto::json& body);
    proto::json compile(const proto::json& body);
    proto::json top_components(const proto::json& body);
    proto::json simulate(const proto::json& body, bool assoc, bool real_time);
    proto::json simulate_centralized(const proto::json& body, const std::shared_ptr<const CoupledSpec>& root,
                                     const std::map<std::string, std::string>& assignment,
                                     const std::vector<std::string>& servers, const std::string& client);
    proto::json simulate_real_time(const proto::json& body, const std::shared_ptr<const CoupledSpec>& root,
                                   const std::map<std::string, std::string>& assignment,
                                   const std::vector<std::string>& servers, const std::string& client);
    proto::json forward(const std::string& path, proto::json body, const std::vector<std::string>& servers,
                        std::size_t hop);

    Package compiled_package(const std::string& name) const;
    sim::SimulationService& service_for(const std::string& endpoint,
                                        std::map<std::string, std::unique_ptr<sim::SimulationService>>& remotes);

    void sweep_loop();

    NodeConfig config_;
    SimulationLayer layer_;

    mutable std::mutex store_mutex_;
    std::map<std::string, Package> store_;
    std::uint64_t revisions_ = 0;

    std::mutex sweep_mutex_;
    std::condition_variable sweep_cv_;
    bool stopping_ = false;
    std::thread sweeper_;
};

} // namespace devs::node
