#include "devs/node/node.hpp"

#include "devs/core/error.hpp"
#include "devs/node/remote_service.hpp"
#include "devs/proto/assignment.hpp"
#include "devs/proto/key.hpp"
#include "devs/proto/log_record.hpp"
#include "devs/sim/coordinator.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <set>

namespace devs::node {

using proto::json;
using Clock = std::chrono::system_clock;

namespace {

std::string required_key(const proto::Envelope& req) {
    if (!req.key) throw Error(Errc::decode_error, "request for " + req.service + " carries no simulator key");
    return req.key->str();
}

Time required_time(const proto::Envelope& req) {
    if (!req.time) throw Error(Errc::decode_error, "request for " + req.service + " carries no time");
    return *req.time;
}

std::string text_field(const json& body, const char* name) {
    auto it = body.find(name);
    if (it == body.end() || !it->is_string()) {
        throw Error(Errc::decode_error, std::string("body field '") + name + "' must be a string");
    }
    return it->get<std::string>();
}

std::vector<std::string> list_field(const json& body, const char* name) {
    auto it = body.find(name);
    if (it == body.end() || !it->is_array()) {
        throw Error(Errc::decode_error, std::string("body field '") + name + "' must be an array");
    }
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string()) throw Error(Errc::decode_error, std::string("'") + name + "' must hold strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::size_t hop_field(const json& body) {
    auto it = body.find("hop");
    if (it == body.end()) return 0;
    if (!it->is_number_unsigned()) throw Error(Errc::decode_error, "body field 'hop' must be a non-negative integer");
    return it->get<std::size_t>();
}

json state_entry(const Payload& state) {
    json out{{"state", proto::payload_to_json(state)}};
    if (state.is_record()) {
        const auto& rec = state.as_record();
        if (auto it = rec.find("phase"); it != rec.end() && it->second.is_text()) out["phase"] = it->second.as_text();
    }
    return out;
}

json trace_to_json(const std::vector<sim::TraceEvent>& trace) {
    json out = json::array();
    for (const auto& e : trace) {
        out.push_back(json{{"time", proto::time_to_json(e.time)},
                           {"component", e.component},
                           {"port", e.port},
                           {"value", proto::payload_to_json(e.value)}});
    }
    return out;
}

void collect_unknown_kinds(const CoupledSpec& spec, const BehaviorRegistry& registry, std::set<std::string>& out) {
    for (const auto& c : spec.components) {
        if (c.is_coupled()) {
            collect_unknown_kinds(c.coupled(), registry, out);
        } else if (!registry.contains(c.atomic().kind)) {
            out.insert(c.atomic().kind);
        }
    }
}

} // namespace

const std::vector<std::string>& Node::paths() {
    static const std::vector<std::string> all = {
        "/main/upload",       "/main/compile",      "/main/topComponents", "/main/simulate",
        "/main/simulateAssoc", "/main/simulateRT",  "/main/simulateAssocRT", "/sim/newSimulator",
        "/sim/initialize",    "/sim/receiveInput",  "/sim/lambda",         "/sim/deltfcn",
        "/sim/getOutput",     "/sim/getTN",         "/sim/exit",           "/sim/getConsole",
        "/sim/getIp",         "/sim/rtInstallRoutes", "/sim/rtStart",      "/sim/getState",
        "/sim/diagnostics",   "/sim/beginRun",
    };
    return all;
}

Node::Node(NodeConfig config)
    : config_(std::move(config)), layer_(config_.registry, config_.transport, config_.address) {
    if (config_.idle_timeout.count() > 0) sweeper_ = std::thread([this] { sweep_loop(); });
}

Node::~Node() {
    {
        std::lock_guard lock(sweep_mutex_);
        stopping_ = true;
    }
    sweep_cv_.notify_all();
    if (sweeper_.joinable()) sweeper_.join();
}

void Node::sweep_loop() {
    const auto period = std::min<std::chrono::milliseconds>(std::chrono::seconds(1), config_.idle_timeout / 4 + std::chrono::milliseconds(1));
    std::unique_lock lock(sweep_mutex_);
    while (!sweep_cv_.wait_for(lock, period, [this] { return stopping_; })) {
        lock.unlock();
        layer_.sweep_idle(config_.idle_timeout);
        lock.lock();
    }
}

proto::Envelope Node::handle(std::string_view path, const proto::Envelope& request) {
    try {
        return proto::make_reply(request, dispatch(path, request));
    } catch (const Error& e) {
        return proto::make_error_reply(request, to_string(e.code()), e.what());
    } catch (const json::exception& e) {
        return proto::make_error_reply(request, to_string(Errc::decode_error), e.what());
    } catch (const std::exception& e) {
        spdlog::error("{} failed: {}", path, e.what());
        return proto::make_error_reply(request, to_string(Errc::internal), e.what());
    }
}

json Node::dispatch(std::string_view path, const proto::Envelope& req) {
    const json& body = req.body;
    if (path == "/sim/newSimulator") {
        auto it = body.find("component");
        if (it == body.end()) throw Error(Errc::decode_error, "newSimulator needs a component");
        layer_.new_simulator(required_key(req), proto::component_from_json(*it, "/body/component"));
        return json::object();
    }
    if (path == "/sim/initialize") {
        layer_.initialize(required_key(req), required_time(req));
        return json::object();
    }
    if (path == "/sim/receiveInput") {
        if (body.value("peer", false)) {
            layer_.peer_input(required_key(req), required_time(req), items_from_json(body.at("items")));
        } else {
            layer_.receive_input(required_key(req), text_field(body, "fromPort"),
                                 proto::payload_from_json(body.at("value"), "/body/value"), text_field(body, "toPort"));
        }
        return json::object();
    }
    if (path == "/sim/lambda") {
        layer_.lambda(required_key(req), required_time(req));
        return json::object();
    }
    if (path == "/sim/deltfcn") {
        layer_.deltfcn(required_key(req), required_time(req));
        return json::object();
    }
    if (path == "/sim/getOutput") return json{{"bag", proto::bag_to_json(layer_.get_output(required_key(req)))}};
    if (path == "/sim/getTN") return json{{"tN", proto::time_to_json(layer_.get_tn(required_key(req)))}};
    if (path == "/sim/exit") {
        layer_.exit(required_key(req));
        return json::object();
    }
    if (path == "/sim/getConsole") return proto::log_to_json(layer_.console(text_field(body, "client")));
    if (path == "/sim/getIp") return json{{"address", config_.address}};
    if (path == "/sim/rtInstallRoutes") {
        std::vector<PeerRoute> routes;
        for (const auto& r : body.at("routes")) routes.push_back(route_from_json(r));
        layer_.install_routes(required_key(req), std::move(routes));
        return json::object();
    }
    if (path == "/sim/rtStart") {
        RtOptions opts;
        opts.observe = proto::time_from_json(body.at("observeTime"), "/body/observeTime");
        opts.timescale = body.value("timescale", 1.0);
        opts.start_at = Clock::now();
        if (auto it = body.find("startAt"); it != body.end()) {
            opts.start_at = Clock::time_point(std::chrono::milliseconds(it->get<std::int64_t>()));
        }
        layer_.rt_start(required_key(req), opts);
        return json::object();
    }
    if (path == "/sim/getState") {
        const auto key = required_key(req);
        const Payload state = layer_.get_state(key);
        return json{{"state", proto::payload_to_json(state)}, {"phase", layer_.get_phase(key)}};
    }
    if (path == "/sim/diagnostics") return layer_.diagnostics();
    if (path == "/sim/beginRun") {
        layer_.begin_run(text_field(body, "client"));
        return json::object();
    }

    if (path == "/main/upload") return upload(body);
    if (path == "/main/compile") return compile(body);
    if (path == "/main/topComponents") return top_components(body);
    if (path == "/main/simulate") return simulate(body, false, false);
    if (path == "/main/simulateAssoc") return simulate(body, true, false);
    if (path == "/main/simulateRT") return simulate(body, false, true);
    if (path == "/main/simulateAssocRT") return simulate(body, true, true);

    throw Error(Errc::not_found, "no service at " + std::string(path));
}

json Node::forward(const std::string& path, json body, const std::vector<std::string>& servers, std::size_t hop) {
    if (hop + 1 >= servers.size()) return json::object();
    const std::string& next = servers[hop + 1];
    body["hop"] = hop + 1;
    proto::Envelope env;
    env.service = path.substr(path.rfind('/') + 1);
    env.body = std::move(body);
    return config_.transport->call(next, path, env).body;
}

json Node::upload(const json& body) {
    const std::string package = text_field(body, "packageName");
    const auto servers = list_field(body, "servers");
    const std::size_t hop = hop_field(body);

    const auto& files = body.at("files");
    const json* manifest_file = nullptr;
    for (const auto& f : files) {
        const std::string name = f.at("name").get<std::string>();
        if (name.size() >= proto::manifest_extension.size() &&
            name.compare(name.size() - proto::manifest_extension.size(), std::string::npos,
                         proto::manifest_extension) == 0) {
            if (manifest_file) throw Error(Errc::upload_error, config_.address + ": more than one manifest uploaded");
            manifest_file = &f;
        }
    }
    if (!manifest_file) throw Error(Errc::upload_error, config_.address + ": no manifest (*.devs.json) uploaded");

    proto::ModelManifest manifest;
    try {
        manifest = proto::parse_manifest(manifest_file->at("content").get<std::string>());
    } catch (const Error& e) {
        throw Error(Errc::upload_error, config_.address + ": " + e.what());
    }
    {
        std::lock_guard lock(store_mutex_);
        Package& p = store_[package];
        const bool replaced = p.revision != 0;
        p.manifest = std::move(manifest);
        p.revision = ++revisions_;
        p.compiled = false;
        p.ns.clear();
        if (replaced) spdlog::info("package {} replaced by revision {}", package, p.revision);
    }

    json uploaded = json::array({config_.address});
    try {
        json next = forward("/main/upload", body, servers, hop);
        for (const auto& ep : next.value("uploaded", json::array())) uploaded.push_back(ep);
    } catch (const Error& e) {
        throw Error(Errc::upload_error, "forwarding upload to " + servers[hop + 1] + " failed: " + e.what());
    }
    return json{{"uploaded", uploaded}};
}

json Node::compile(const json& body) {
    const std::string package = text_field(body, "packageName");
    const auto servers = list_field(body, "servers");
    const std::size_t hop = hop_field(body);

    proto::ModelManifest manifest;
    {
        std::lock_guard lock(store_mutex_);
        auto it = store_.find(package);
        if (it == store_.end()) throw Error(Errc::not_found, config_.address + ": package '" + package + "' not uploaded");
        manifest = it->second.manifest;
    }
    std::shared_ptr<const CoupledSpec> root;
    try {
        root = proto::resolve_model(manifest, manifest.top_model);
    } catch (const Error& e) {
        throw Error(Errc::compile_error, config_.address + ": " + e.what());
    }
    std::set<std::string> unknown;
    collect_unknown_kinds(*root, *config_.registry, unknown);
    std::string problems;
    for (const auto& v : validate_coupled(*root, *config_.registry)) {
        if (v.kind != Violation::Kind::unknown_behavior) problems += "\n  " + v.str();
    }
    if (!unknown.empty()) {
        std::string msg = config_.address + ": unknown behavior kinds:";
        for (const auto& k : unknown) msg += " " + k;
        throw Error(Errc::compile_error, msg + problems);
    }
    if (!problems.empty()) throw Error(Errc::compile_error, config_.address + ": invalid model:" + problems);

    std::string ns;
    {
        std::lock_guard lock(store_mutex_);
        Package& p = store_[package];
        p.compiled = true;
        p.ns = package + ".r" + std::to_string(p.revision);
        ns = p.ns;
    }

    json compiled = json::array({config_.address});
    try {
        json next = forward("/main/compile", body, servers, hop);
        for (const auto& ep : next.value("compiled", json::array())) compiled.push_back(ep);
    } catch (const Error& e) {
        throw Error(Errc::compile_error, "forwarding compile to " + servers[hop + 1] + " failed: " + e.what());
    }
    return json{{"compiled", compiled}, {"namespace", ns}};
}

Node::Package Node::compiled_package(const std::string& name) const {
    std::lock_guard lock(store_mutex_);
    auto it = store_.find(name);
    if (it == store_.end() || !it->second.compiled) {
        throw Error(Errc::not_found, config_.address + ": package '" + name + "' is not compiled");
    }
    return it->second;
}

json Node::top_components(const json& body) {
    const Package p = compiled_package(text_field(body, "packageName"));
    const std::string root = body.contains("rootName") ? text_field(body, "rootName") : p.manifest.top_model;
    const auto* model = p.manifest.find_model(root);
    if (!model) throw Error(Errc::not_found, "no model named '" + root + "'");
    json names = json::array();
    for (const auto& c : model->components) names.push_back(c.name);
    return json{{"components", names}};
}

sim::SimulationService& Node::service_for(const std::string& endpoint,
                                          std::map<std::string, std::unique_ptr<sim::SimulationService>>& remotes) {
    if (endpoint == config_.address) return layer_;
    auto& slot = remotes[endpoint];
    if (!slot) slot = std::make_unique<RemoteSimulationService>(config_.transport, endpoint);
    return *slot;
}

json Node::simulate(const json& body, bool assoc, bool real_time) {
    const Package p = compiled_package(text_field(body, "packageName"));
    const std::string root_name = body.contains("rootName") ? text_field(body, "rootName") : p.manifest.top_model;
    const auto root = proto::resolve_model(p.manifest, root_name);
    const std::string client = text_field(body, "clientAddress");
    const auto servers = list_field(body, "servers");
    if (servers.empty()) throw Error(Errc::no_servers, "no servers listed");

    const auto names = root->component_names();
    proto::AssignmentMap assignment;
    if (assoc) {
        for (const auto& [comp, ep] : body.at("assignment").items()) assignment[comp] = ep.get<std::string>();
    } else {
        assignment = proto::round_robin_assign(names, servers);
    }
    proto::check_assignment(assignment, names, servers);
    for (const auto& n : names) proto::render_key(n, client);

    std::set<std::string> used;
    for (const auto& [_, ep] : assignment) used.insert(ep);
    std::set<std::string> seen;
    for (const auto& ep : servers) {
        if (!seen.insert(ep).second) continue;
        try {
            if (ep == config_.address) {
                layer_.begin_run(client);
            } else {
                proto::Envelope env;
                env.service = "beginRun";
                env.body = json{{"client", client}};
                config_.transport->call(ep, "/sim/beginRun", env);
            }
        } catch (const Error& e) {
            if (used.count(ep)) throw;
            spdlog::warn("server {} unavailable before the run: {}", ep, e.what());
        }
    }

    json out = real_time ? simulate_real_time(body, root, assignment, servers, client)
                         : simulate_centralized(body, root, assignment, servers, client);
    json assigned = json::object();
    for (const auto& [c, ep] : assignment) assigned[c] = ep;
    out["assignment"] = assigned;
    out["namespace"] = p.ns;
    out["root"] = root_name;
    return out;
}

json Node::simulate_centralized(const json& body, const std::shared_ptr<const CoupledSpec>& root,
                                const std::map<std::string, std::string>& assignment,
                                const std::vector<std::string>&, const std::string& client) {
    const auto it = body.find("iterations");
    if (it == body.end() || !it->is_number_unsigned()) {
        throw Error(Errc::invalid_argument, "centralized runs need a non-negative integer 'iterations'");
    }
    const std::uint64_t iterations = it->get<std::uint64_t>();
    std::optional<Time> end_time;
    if (auto e = body.find("endTime"); e != body.end()) end_time = proto::time_from_json(*e, "/body/endTime");

    std::map<std::string, std::unique_ptr<sim::SimulationService>> remotes;
    std::map<std::string, sim::SimulationService*> placement;
    for (const auto& [comp, ep] : assignment) placement[comp] = &service_for(ep, remotes);

    sim::Coordinator coord(client, root, placement, config_.registry);
    sim::RunResult result;
    std::map<std::string, Payload> states;
    try {
        coord.create_simulators();
        coord.initialize(Time::zero());
        result = coord.simulate(iterations, end_time);
        states = coord.collect_states();
    } catch (const Error& e) {
        result.complete = false;
        if (result.error.empty()) result.error = e.what();
        spdlog::warn("run for {} failed: {}", client, e.what());
    }
    coord.exit();
    layer_.counters().coordinator_relayed += coord.relayed_messages();

    json final_states = json::object();
    for (const auto& [comp, st] : states) final_states[comp] = state_entry(st);
    json keys = json::object();
    for (const auto& [comp, key] : coord.keys()) keys[comp] = key;
    return json{{"mode", "centralized"},
                {"complete", result.complete},
                {"error", result.error},
                {"cycles", result.cycles},
                {"lastTime", proto::time_to_json(result.last_time)},
                {"nextTime", proto::time_to_json(result.next_time)},
                {"trace", trace_to_json(result.trace)},
                {"finalStates", final_states},
                {"relayed", coord.relayed_messages()},
                {"keys", keys}};
}

json Node::simulate_real_time(const json& body, const std::shared_ptr<const CoupledSpec>& root,
                              const std::map<std::string, std::string>& assignment,
                              const std::vector<std::string>&, const std::string& client) {
    if (!body.contains("observeTime")) throw Error(Errc::invalid_argument, "real-time runs need 'observeTime'");
    const Time observe = proto::time_from_json(body.at("observeTime"), "/body/observeTime");
    if (observe.is_infinite()) throw Error(Errc::invalid_argument, "observation time must be finite");
    const double timescale = body.value("timescale", 1.0);
    if (!(timescale > 0.0)) throw Error(Errc::invalid_argument, "timescale must be positive");
    require_valid(*root, *config_.registry);

    std::map<std::string, std::unique_ptr<RemoteSimulationService>> remotes;
    auto remote = [&](const std::string& ep) -> RemoteSimulationService& {
        auto& slot = remotes[ep];
        if (!slot) slot = std::make_unique<RemoteSimulationService>(config_.transport, ep);
        return *slot;
    };
    auto host = [&](const std::string& comp) -> sim::SimulationService& {
        const auto& ep = assignment.at(comp);
        if (ep == config_.address) return layer_;
        return remote(ep);
    };

    std::map<std::string, std::string> keys;
    for (const auto& comp : root->components) keys[comp.name] = proto::render_key(comp.name, client);

    std::vector<std::string> created;
    bool complete = true;
    std::string error;
    json final_states = json::object();
    try {
        for (const auto& comp : root->components) {
            host(comp.name).new_simulator(keys.at(comp.name), comp);
            created.push_back(comp.name);
        }
        for (const auto& comp : created) host(comp).initialize(keys.at(comp), Time::zero());

        // the coupling table is broken down per source simulator and pushed to its host
        std::map<std::string, std::vector<PeerRoute>> routes;
        for (const auto& comp : created) routes[comp];
        for (const auto& r : sim::resolve_routes(*root)) {
            if (r.to_component.empty()) continue;
            routes[r.from_component].push_back(
                PeerRoute{r.from_port, assignment.at(r.to_component), keys.at(r.to_component), r.to_port, r.translation});
        }
        for (const auto& [comp, list] : routes) {
            const auto& ep = assignment.at(comp);
            if (ep == config_.address) {
                layer_.install_routes(keys.at(comp), list);
            } else {
                json arr = json::array();
                for (const auto& pr : list) arr.push_back(route_to_json(pr));
                remote(ep).call("/sim/rtInstallRoutes", keys.at(comp), json{{"routes", arr}});
            }
        }

        const auto start_at = Clock::now() + config_.rt_start_delay;
        const auto start_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(start_at.time_since_epoch()).count();
        for (const auto& comp : created) {
            const auto& ep = assignment.at(comp);
            if (ep == config_.address) {
                RtOptions opts;
                opts.observe = observe;
                opts.timescale = timescale;
                opts.start_at = Clock::time_point(std::chrono::milliseconds(start_ms));
                layer_.rt_start(keys.at(comp), opts);
            } else {
                remote(ep).call("/sim/rtStart", keys.at(comp),
                                json{{"observeTime", proto::time_to_json(observe)},
                                     {"timescale", timescale},
                                     {"startAt", start_ms}});
            }
        }

        // getState waits for each simulator to reach the end of the window
        for (const auto& comp : created) final_states[comp] = state_entry(host(comp).get_state(keys.at(comp)));
    } catch (const Error& e) {
        complete = false;
        error = e.what();
        spdlog::warn("real-time run for {} failed: {}", client, e.what());
    }
    for (const auto& comp : created) {
        try {
            host(comp).exit(keys.at(comp));
        } catch (const Error& e) {
            spdlog::warn("exit of {} failed: {}", keys.at(comp), e.what());
        }
    }

    json keys_json = json::object();
    for (const auto& [comp, key] : keys) keys_json[comp] = key;
    return json{{"mode", "rt"},
                {"complete", complete},
                {"error", error},
                {"cycles", 0},
                {"observeTime", proto::time_to_json(observe)},
                {"timescale", timescale},
                {"trace", json::array()},
                {"finalStates", final_states},
                {"relayed", 0},
                {"keys", keys_json}};
}

} // namespace devs::node
