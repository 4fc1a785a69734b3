#pragma once

#include "devs/node/transport.hpp"
#include "devs/sim/service.hpp"

#include <memory>
#include <string>

namespace devs::node {

/// The simulation-layer protocol spoken to another node.
class RemoteSimulationService : public sim::SimulationService {
public:
    RemoteSimulationService(std::shared_ptr<Transport> transport, std::string endpoint);

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

    proto::Envelope call(const std::string& path, const std::string& key, proto::json body = proto::json::object(),
                         std::optional<Time> t = std::nullopt);

private:
    std::shared_ptr<Transport> transport_;
    std::string endpoint_;
};

} // namespace devs::node
