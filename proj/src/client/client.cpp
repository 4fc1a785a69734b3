#include "devs/client/client.hpp"

#include "devs/core/error.hpp"
#include "devs/proto/codec.hpp"
#include "devs/sim/trace.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace devs::client {

using proto::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::invalid_argument, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> distinct(const std::vector<std::string>& servers) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& s : servers) {
        if (seen.insert(s).second) out.push_back(s);
    }
    return out;
}

std::vector<std::string> top_components(const proto::ModelManifest& manifest) {
    const auto* top = manifest.find_model(manifest.top_model);
    std::vector<std::string> names;
    for (const auto& c : top->components) names.push_back(c.name);
    return names;
}

proto::Envelope request(std::string service, json body) {
    proto::Envelope env;
    env.service = std::move(service);
    env.body = std::move(body);
    return env;
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
    if (from.empty() || from == to) return;
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
}

// Runs one MainService phase and records a status line per endpoint the
// chain reached. Returns false if the phase failed.
bool run_phase(SimulationReport& report, node::Transport& transport, const std::string& phase,
               const std::string& path, const json& body, const char* reached_field) {
    const std::string& main = report.servers.front();
    try {
        const auto reply = transport.call(main, path, request(path.substr(path.rfind('/') + 1), body));
        for (const auto& ep : reply.body.value(reached_field, json::array())) {
            report.phases.push_back(PhaseStatus{phase, ep.get<std::string>(), true, ""});
        }
        return true;
    } catch (const Error& e) {
        report.phases.push_back(PhaseStatus{phase, main, false, e.what()});
        report.failure = phase + " failed: " + e.what();
        return false;
    }
}

} // namespace

proto::AssignmentMap plan_assignment(const ClientConfig& config, const proto::ModelManifest& manifest) {
    const auto names = top_components(manifest);
    if (config.assign == "auto") return proto::round_robin_assign(names, config.servers);
    auto assignment = proto::parse_assignment(read_file(config.assign));
    proto::check_assignment(assignment, names, config.servers);
    return assignment;
}

std::vector<NodeOutput> fetch_logs(const ClientConfig& config, node::Transport& transport,
                                   const std::string& client_address) {
    std::vector<NodeOutput> out;
    for (const auto& ep : distinct(config.servers)) {
        NodeOutput entry;
        entry.endpoint = ep;
        try {
            const auto reply = transport.call(ep, "/sim/getConsole", request("getConsole", json{{"client", client_address}}));
            entry.log = proto::log_from_json(reply.body);
            entry.available = true;
        } catch (const std::exception& e) {
            entry.error = e.what();
            entry.log.node_address = ep;
            entry.log.client_address = client_address;
        }
        out.push_back(std::move(entry));
    }
    return out;
}

SimulationReport run(const ClientConfig& config, node::Transport& transport) {
    if (config.servers.empty()) throw Error(Errc::no_servers, "the server list is empty");
    const std::string manifest_text = read_file(config.manifest_path);
    const auto manifest = proto::parse_manifest(manifest_text);

    SimulationReport report;
    report.servers = config.servers;
    report.package_name = manifest.package_name;
    report.components = top_components(manifest);
    report.assignment = plan_assignment(config, manifest);
    report.mode = config.mode == Mode::centralized ? "centralized" : "rt";
    report.iterations = config.iterations;
    report.observe_seconds = config.observe_seconds;
    report.client_address =
        config.client_address.empty() ? detect_client_address(config.servers.front()) : config.client_address;

    std::string file_name = std::filesystem::path(config.manifest_path).filename().string();
    if (!file_name.ends_with(proto::manifest_extension)) file_name = manifest.package_name + ".devs.json";
    const json servers = config.servers;
    const json files = json::array({json{{"name", file_name}, {"content", manifest_text}}});

    if (!run_phase(report, transport, "upload", "/main/upload",
                   json{{"packageName", manifest.package_name}, {"files", files}, {"servers", servers}}, "uploaded")) {
        return report;
    }
    if (!run_phase(report, transport, "compile", "/main/compile",
                   json{{"packageName", manifest.package_name}, {"servers", servers}}, "compiled")) {
        return report;
    }

    const bool assoc = config.assign != "auto";
    std::string path = "/main/simulate";
    if (assoc) path += "Assoc";
    if (config.mode == Mode::real_time) path += "RT";
    json body{{"packageName", manifest.package_name},
              {"rootName", manifest.top_model},
              {"clientAddress", report.client_address},
              {"servers", servers}};
    if (assoc) {
        json a = json::object();
        for (const auto& [c, ep] : report.assignment) a[c] = ep;
        body["assignment"] = a;
    }
    if (config.mode == Mode::centralized) {
        body["iterations"] = config.iterations;
        if (config.end_time) body["endTime"] = *config.end_time;
    } else {
        body["observeTime"] = config.observe_seconds;
        body["timescale"] = config.timescale;
    }

    const std::string& main = config.servers.front();
    try {
        const auto reply = transport.call(main, path, request(path.substr(path.rfind('/') + 1), body));
        const json& r = reply.body;
        const bool complete = r.value("complete", false);
        report.phases.push_back(PhaseStatus{"simulate", main, complete, r.value("error", "")});
        report.iterations = r.value("cycles", std::uint64_t{0});
        if (config.mode == Mode::real_time) report.iterations = 0;
        for (const auto& e : r.value("trace", json::array())) {
            sim::TraceEvent ev{proto::time_from_json(e.at("time")), e.at("component").get<std::string>(),
                               e.at("port").get<std::string>(), proto::payload_from_json(e.at("value"))};
            report.trace.push_back(ev.render());
        }
        report.final_states = r.value("finalStates", json::object());
        report.relayed = r.value("relayed", std::uint64_t{0});
        report.completed = complete;
        if (!complete) report.failure = "simulate failed: " + r.value("error", std::string("unknown error"));
    } catch (const Error& e) {
        report.phases.push_back(PhaseStatus{"simulate", main, false, e.what()});
        report.failure = std::string("simulate failed: ") + e.what();
    }

    report.per_node = fetch_logs(config, transport, report.client_address);
    return report;
}

SimulationReport stabilize(SimulationReport report) {
    std::vector<std::pair<std::string, std::string>> names;
    const auto eps = distinct(report.servers);
    for (std::size_t i = 0; i < eps.size(); ++i) names.emplace_back(eps[i], "node" + std::to_string(i + 1));
    // longest endpoints first so "h:80" never clobbers part of "h:8080"
    std::sort(names.begin(), names.end(), [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
    auto map_ep = [&](const std::string& ep) {
        for (const auto& [from, to] : names) {
            if (ep == from) return to;
        }
        return ep;
    };
    auto scrub = [&](std::string s) {
        for (const auto& [from, to] : names) replace_all(s, from, to);
        replace_all(s, report.client_address, "client");
        return s;
    };

    for (auto& s : report.servers) s = map_ep(s);
    for (auto& [_, ep] : report.assignment) ep = map_ep(ep);
    for (auto& p : report.phases) {
        p.endpoint = map_ep(p.endpoint);
        p.message = scrub(p.message);
    }
    for (auto& n : report.per_node) {
        n.endpoint = map_ep(n.endpoint);
        n.log.node_address = n.endpoint;
        n.log.client_address = "client";
        for (auto& line : n.log.lines) line = scrub(line);
        n.error = scrub(n.error);
    }
    report.failure = scrub(report.failure);
    report.client_address = "client";
    return report;
}

namespace {

std::string node_heading(const SimulationReport& report, const std::string& endpoint) {
    std::set<std::string> hosts;
    const auto eps = distinct(report.servers);
    for (const auto& ep : eps) hosts.insert(node::endpoint_host(ep));
    return hosts.size() == eps.size() ? node::endpoint_host(endpoint) : endpoint;
}

std::string format_seconds(double s) { return Time(s).to_string(); }

} // namespace

std::string render_text(const SimulationReport& report) {
    std::ostringstream out;
    out << "\nModels assigned specifically to respective Server IP:\n";
    for (const auto& c : report.components) {
        auto it = report.assignment.find(c);
        out << "--Component Model: " << c << " --> " << (it == report.assignment.end() ? "?" : it->second) << "\n";
    }

    auto phase_lines = [&](const std::string& phase, const char* attempt, const char* done) {
        for (const auto& p : report.phases) {
            if (p.phase != phase) continue;
            out << attempt << p.endpoint << (phase == "compile" ? "..." : "") << "\n";
            if (p.ok) {
                out << done << "\n";
            } else {
                out << "FAILED: " << p.message << "\n";
            }
        }
    };
    auto has_phase = [&](const std::string& phase) {
        return std::any_of(report.phases.begin(), report.phases.end(), [&](const auto& p) { return p.phase == phase; });
    };

    out << "\nUploading in progress... please wait...\nInitiating UPLOAD...\n";
    phase_lines("upload", "Uploading files to server ", "Files uploaded.");
    if (has_phase("compile")) {
        out << "\nCompilation in progress....please wait....\n\nStarting compilation at remote servers.....\n";
        phase_lines("compile", "Compiling project at ", "Project compiled.");
    }
    if (has_phase("simulate")) {
        out << "\nWaiting to start SIMULATION....\n\nSimulation in Progress....please wait...\n";
        out << "Running simulation ...\n";
        if (report.mode == "rt") {
            out << "Real-time observation of " << format_seconds(report.observe_seconds) << " s.\n";
        } else {
            out << report.iterations << " iterations.\n";
        }
        out << "Simulators output:\n";
        for (const auto& n : report.per_node) {
            out << "\n" << node_heading(report, n.endpoint) << " output:\n";
            if (!n.available) {
                out << "(output unavailable: " << n.error << ")\n";
                continue;
            }
            for (const auto& line : n.log.lines) out << line << "\n";
        }
    }
    out << "\n";
    if (report.completed) {
        out << "SIMULATION over!\n";
    } else {
        out << "SIMULATION incomplete: " << report.failure << "\n";
    }
    return out.str();
}

json render_json(const SimulationReport& report) {
    json assignment = json::object();
    for (const auto& [c, ep] : report.assignment) assignment[c] = ep;
    json echo = json::array();
    for (const auto& c : report.components) {
        auto it = report.assignment.find(c);
        echo.push_back(c + " -> " + (it == report.assignment.end() ? std::string("?") : it->second));
    }
    json phases = json::array();
    for (const auto& p : report.phases) {
        phases.push_back(json{{"phase", p.phase}, {"endpoint", p.endpoint}, {"ok", p.ok}, {"message", p.message}});
    }
    json per_node = json::object();
    json node_order = json::array();
    for (const auto& n : report.per_node) {
        node_order.push_back(n.endpoint);
        per_node[n.endpoint] = json{{"available", n.available}, {"lines", n.log.lines}, {"error", n.error}};
    }
    json out{{"clientAddress", report.client_address},
             {"package", report.package_name},
             {"mode", report.mode},
             {"servers", report.servers},
             {"components", report.components},
             {"assignment", assignment},
             {"assignmentEcho", echo},
             {"phases", phases},
             {"perNodeOutput", per_node},
             {"nodeOrder", node_order},
             {"verdict", report.completed ? "completed" : "incomplete"},
             {"failure", report.failure},
             {"trace", report.trace},
             {"finalStates", report.final_states},
             {"relayed", report.relayed}};
    if (report.mode == "rt") {
        out["observeTime"] = report.observe_seconds;
    } else {
        out["iterations"] = report.iterations;
    }
    return out;
}

std::string detect_client_address(const std::string& endpoint) {
    std::string host = node::endpoint_host(endpoint);
    std::string port = "80";
    try {
        port = std::to_string(node::split_endpoint(endpoint).second);
    } catch (const Error&) {
    }
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_DGRAM;
    addrinfo* res = nullptr;
    if (getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0 || !res) return "127.0.0.1";
    std::string found = "127.0.0.1";
    const int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd >= 0) {
        // connecting a datagram socket sends nothing; it only picks the route
        if (::connect(fd, res->ai_addr, res->ai_addrlen) == 0) {
            sockaddr_in local{};
            socklen_t len = sizeof local;
            if (::getsockname(fd, reinterpret_cast<sockaddr*>(&local), &len) == 0) {
                char buf[INET_ADDRSTRLEN] = {};
                if (::inet_ntop(AF_INET, &local.sin_addr, buf, sizeof buf)) found = buf;
            }
        }
        ::close(fd);
    }
    freeaddrinfo(res);
    return found;
}

InProcessCluster::InProcessCluster(const std::vector<std::string>& servers,
                                   std::shared_ptr<const BehaviorRegistry> registry)
    : transport_(std::make_shared<node::LocalTransport>()) {
    for (const auto& ep : distinct(servers)) {
        node::NodeConfig cfg;
        cfg.address = ep;
        cfg.registry = registry;
        cfg.transport = transport_;
        nodes_.push_back(std::make_unique<node::Node>(cfg));
        transport_->attach(ep, nodes_.back().get());
    }
}

InProcessCluster::~InProcessCluster() {
    for (const auto& n : nodes_) transport_->detach(n->address());
    nodes_.clear();
}

node::Node& InProcessCluster::node(const std::string& endpoint) {
    for (const auto& n : nodes_) {
        if (n->address() == endpoint) return *n;
    }
    throw Error(Errc::not_found, "no in-process node " + endpoint);
}

} // namespace devs::client
