#include "devs/node/remote_service.hpp"

#include "devs/core/error.hpp"
#include "devs/proto/codec.hpp"

namespace devs::node {

using proto::json;

RemoteSimulationService::RemoteSimulationService(std::shared_ptr<Transport> transport, std::string endpoint)
    : transport_(std::move(transport)), endpoint_(std::move(endpoint)) {}

proto::Envelope RemoteSimulationService::call(const std::string& path, const std::string& key, json body,
                                              std::optional<Time> t) {
    proto::Envelope env;
    env.service = path.substr(path.rfind('/') + 1);
    if (!key.empty()) env.key = proto::parse_key(key);
    env.time = t;
    env.body = std::move(body);
    return transport_->call(endpoint_, path, env);
}

void RemoteSimulationService::new_simulator(const std::string& key, const ComponentSpec& component) {
    call("/sim/newSimulator", key, json{{"component", proto::component_to_json(component)}});
}

void RemoteSimulationService::initialize(const std::string& key, Time t) {
    call("/sim/initialize", key, json::object(), t);
}

void RemoteSimulationService::receive_input(const std::string& key, const std::string& from_port,
                                            const Payload& value, const std::string& to_port) {
    call("/sim/receiveInput", key,
         json{{"fromPort", from_port}, {"toPort", to_port}, {"value", proto::payload_to_json(value)}});
}

void RemoteSimulationService::lambda(const std::string& key, Time t) { call("/sim/lambda", key, json::object(), t); }

void RemoteSimulationService::deltfcn(const std::string& key, Time t) {
    call("/sim/deltfcn", key, json::object(), t);
}

MessageBag RemoteSimulationService::get_output(const std::string& key) {
    return proto::bag_from_json(call("/sim/getOutput", key).body.at("bag"), "/body/bag");
}

Time RemoteSimulationService::get_tn(const std::string& key) {
    return proto::time_from_json(call("/sim/getTN", key).body.at("tN"), "/body/tN");
}

void RemoteSimulationService::exit(const std::string& key) { call("/sim/exit", key); }

Payload RemoteSimulationService::get_state(const std::string& key) {
    return proto::payload_from_json(call("/sim/getState", key).body.at("state"), "/body/state");
}

} // namespace devs::node
