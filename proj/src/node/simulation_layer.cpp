#include "devs/node/simulation_layer.hpp"

#include "devs/core/error.hpp"
#include "devs/proto/key.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <condition_variable>
#include <thread>

namespace devs::node {

using proto::json;
using Clock = std::chrono::system_clock;

json route_to_json(const PeerRoute& r) {
    return json{{"outPort", r.out_port},
                {"endpoint", r.endpoint},
                {"key", r.key},
                {"inPort", r.in_port},
                {"translation", r.translation}};
}

PeerRoute route_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::decode_error, "route must be an object");
    PeerRoute r;
    r.out_port = j.at("outPort").get<std::string>();
    r.endpoint = j.at("endpoint").get<std::string>();
    r.key = j.at("key").get<std::string>();
    r.in_port = j.at("inPort").get<std::string>();
    r.translation = j.value("translation", std::string(identity_translation));
    return r;
}

json items_to_json(const std::vector<PeerItem>& items) {
    json out = json::array();
    for (const auto& i : items) {
        out.push_back(json{{"from", i.from_port}, {"to", i.to_port}, {"value", proto::payload_to_json(i.value)}});
    }
    return out;
}

std::vector<PeerItem> items_from_json(const json& j) {
    if (!j.is_array()) throw Error(Errc::decode_error, "peer items must be an array");
    std::vector<PeerItem> out;
    for (const auto& i : j) {
        out.push_back(PeerItem{i.at("from").get<std::string>(), i.at("to").get<std::string>(),
                               proto::payload_from_json(i.at("value"), "/items")});
    }
    return out;
}

struct SimulationLayer::Runner {
    struct Delivery {
        Time t;
        std::vector<PeerItem> items;
        std::uint64_t seq;
    };

    std::mutex m;
    std::condition_variable cv;
    std::vector<PeerRoute> routes;
    std::vector<Delivery> inbox;
    std::uint64_t next_seq = 0;
    RtOptions opts;
    bool started = false;
    bool stop = false;
    bool done = false;
    std::uint64_t transitions = 0;
    std::uint64_t late = 0;
    std::uint64_t dropped = 0;

    std::mutex join_m;
    std::thread thread;

    Clock::time_point wall_of(Time t) const {
        const std::chrono::duration<double> offset(t.value() * opts.timescale);
        return opts.start_at + std::chrono::duration_cast<Clock::duration>(offset);
    }
};

SimulationLayer::SimulationLayer(std::shared_ptr<const BehaviorRegistry> registry,
                                 std::shared_ptr<Transport> transport, std::string address)
    : registry_(registry), transport_(std::move(transport)), table_(registry, address), address_(std::move(address)) {}

SimulationLayer::~SimulationLayer() {
    std::vector<std::shared_ptr<Runner>> all;
    {
        std::lock_guard lock(rt_mutex_);
        for (auto& [_, r] : runners_) all.push_back(r);
    }
    for (auto& r : all) {
        {
            std::lock_guard lock(r->m);
            r->stop = true;
        }
        r->cv.notify_all();
        std::lock_guard join(r->join_m);
        if (r->thread.joinable()) r->thread.join();
    }
}

void SimulationLayer::touch(const std::string& key) {
    const auto client = proto::parse_key(key).client_address;
    std::lock_guard lock(log_mutex_);
    last_seen_[client] = std::chrono::steady_clock::now();
}

void SimulationLayer::new_simulator(const std::string& key, const ComponentSpec& component) {
    const auto parsed = proto::parse_key(key);
    if (parsed.component != component.name) {
        throw Error(Errc::invalid_argument, "key '" + key + "' does not name component '" + component.name + "'");
    }
    table_.new_simulator(key, component);
    std::lock_guard lock(log_mutex_);
    created_[parsed.client_address].push_back(key);
    last_seen_[parsed.client_address] = std::chrono::steady_clock::now();
}

void SimulationLayer::initialize(const std::string& key, Time t) {
    if (auto r = runner(key)) {
        std::lock_guard lock(r->m);
        if (r->started && !r->done) throw Error(Errc::protocol_violation, "'" + key + "' is running in real time");
    }
    table_.initialize(key, t);
    touch(key);
    std::lock_guard lock(log_mutex_);
    initialized_.insert(key);
}

void SimulationLayer::receive_input(const std::string& key, const std::string& from_port, const Payload& value,
                                    const std::string& to_port) {
    table_.receive_input(key, from_port, value, to_port);
    ++counters_.inputs_received;
    touch(key);
}

void SimulationLayer::lambda(const std::string& key, Time t) {
    table_.lambda(key, t);
    touch(key);
}

void SimulationLayer::deltfcn(const std::string& key, Time t) {
    MessageBag out;
    std::string phase;
    table_.with(key, [&](sim::Simulator& s) {
        out = s.output();
        s.deltfcn(t);
        phase = s.model().phase();
    });
    touch(key);
    if (!out.empty()) log_transition(key, out, phase);
}

MessageBag SimulationLayer::get_output(const std::string& key) { return table_.get_output(key); }

Time SimulationLayer::get_tn(const std::string& key) { return table_.get_tn(key); }

void SimulationLayer::exit(const std::string& key) {
    join_runner(key);
    table_.exit(key);
    {
        std::lock_guard lock(rt_mutex_);
        runners_.erase(key);
    }
    std::lock_guard lock(log_mutex_);
    initialized_.erase(key);
}

Payload SimulationLayer::get_state(const std::string& key) {
    join_runner(key);
    return table_.get_state(key);
}

std::string SimulationLayer::get_phase(const std::string& key) {
    join_runner(key);
    return table_.with(key, [](sim::Simulator& s) { return s.model().phase(); });
}

void SimulationLayer::begin_run(const std::string& client) {
    std::lock_guard lock(log_mutex_);
    logs_[client].clear();
    created_[client].clear();
    last_seen_[client] = std::chrono::steady_clock::now();
}

proto::LogRecord SimulationLayer::console(const std::string& client) const {
    std::lock_guard lock(log_mutex_);
    proto::LogRecord rec{address_, client, {}};
    if (auto it = logs_.find(client); it != logs_.end()) rec.lines = it->second;
    return rec;
}

void SimulationLayer::append_log(const std::string& client, std::string line) {
    std::lock_guard lock(log_mutex_);
    logs_[client].push_back(std::move(line));
}

void SimulationLayer::log_transition(const std::string& key, const MessageBag& out, const std::string& phase) {
    const auto parsed = proto::parse_key(key);
    append_log(parsed.client_address, parsed.component + " sending message: " + out.render());
    append_log(parsed.client_address, "State at: " + parsed.component + " is: " + phase);
}

std::shared_ptr<SimulationLayer::Runner> SimulationLayer::runner(const std::string& key) const {
    std::lock_guard lock(rt_mutex_);
    auto it = runners_.find(key);
    return it == runners_.end() ? nullptr : it->second;
}

void SimulationLayer::join_runner(const std::string& key) {
    auto r = runner(key);
    if (!r) return;
    std::lock_guard join(r->join_m);
    if (r->thread.joinable() && r->thread.get_id() != std::this_thread::get_id()) r->thread.join();
}

void SimulationLayer::install_routes(const std::string& key, std::vector<PeerRoute> routes) {
    table_.get_tn(key); // not_found for unknown keys
    touch(key);
    std::shared_ptr<Runner> r;
    {
        std::lock_guard lock(rt_mutex_);
        auto& slot = runners_[key];
        if (!slot) slot = std::make_shared<Runner>();
        r = slot;
    }
    std::lock_guard lock(r->m);
    r->routes = std::move(routes);
}

void SimulationLayer::rt_start(const std::string& key, RtOptions options) {
    table_.get_tn(key);
    {
        std::lock_guard lock(log_mutex_);
        if (!initialized_.count(key)) throw Error(Errc::protocol_violation, "'" + key + "' was never initialized");
    }
    if (!(options.timescale > 0.0)) throw Error(Errc::invalid_argument, "timescale must be positive");
    if (options.observe.is_infinite()) throw Error(Errc::invalid_argument, "observation time must be finite");
    touch(key);
    std::shared_ptr<Runner> r;
    {
        std::lock_guard lock(rt_mutex_);
        auto& slot = runners_[key];
        if (!slot) slot = std::make_shared<Runner>();
        r = slot;
    }
    std::lock_guard join(r->join_m);
    std::lock_guard lock(r->m);
    if (r->started) throw Error(Errc::protocol_violation, "'" + key + "' was already started");
    if (r->routes.empty()) spdlog::debug("{}: no peer routes installed", key);
    r->started = true;
    r->opts = options;
    r->thread = std::thread([this, key, r] { run_rt(key, r); });
}

void SimulationLayer::peer_input(const std::string& key, Time send_time, std::vector<PeerItem> items) {
    counters_.peer_received += items.size();
    auto r = runner(key);
    if (!r) {
        table_.get_tn(key);
        throw Error(Errc::protocol_violation, "'" + key + "' is not in real-time mode");
    }
    std::lock_guard lock(r->m);
    if (r->done || (r->started && send_time > r->opts.observe)) {
        ++r->dropped;
        spdlog::info("{}: dropped peer message stamped {} outside the observation window", key,
                     send_time.to_string());
        return;
    }
    r->inbox.push_back(Runner::Delivery{send_time, std::move(items), r->next_seq++});
    r->cv.notify_all();
}

void SimulationLayer::run_rt(const std::string& key, std::shared_ptr<Runner> r) {
    const RtOptions opts = r->opts;
    const auto halt = r->wall_of(opts.observe) + opts.grace;
    {
        std::unique_lock lock(r->m);
        r->cv.wait_until(lock, opts.start_at, [&] { return r->stop; });
    }
    try {
        while (true) {
            const Time tn = table_.get_tn(key);
            const bool internal_due = tn.is_finite() && tn <= opts.observe;
            const auto deadline = internal_due ? std::min(r->wall_of(tn), halt) : halt;

            Time batch_time;
            std::vector<PeerItem> batch;
            {
                std::unique_lock lock(r->m);
                r->cv.wait_until(lock, deadline, [&] { return r->stop || !r->inbox.empty(); });
                if (r->stop) break;
                if (!r->inbox.empty()) {
                    // earliest logical stamp first; arrival order among equal stamps
                    std::stable_sort(r->inbox.begin(), r->inbox.end(), [](const auto& a, const auto& b) {
                        return a.t < b.t || (a.t == b.t && a.seq < b.seq);
                    });
                    batch_time = r->inbox.front().t;
                    auto it = r->inbox.begin();
                    for (; it != r->inbox.end() && it->t == batch_time; ++it) {
                        batch.insert(batch.end(), it->items.begin(), it->items.end());
                    }
                    r->inbox.erase(r->inbox.begin(), it);
                }
            }
            if (!batch.empty()) {
                if (batch_time > opts.observe) continue;
                rt_step(key, *r, batch_time, batch);
                continue;
            }
            const auto now = Clock::now();
            if (now >= halt) break;
            if (internal_due && now >= r->wall_of(tn)) rt_step(key, *r, tn, {});
        }
    } catch (const std::exception& e) {
        spdlog::error("real-time simulator {} stopped: {}", key, e.what());
    }
    std::lock_guard lock(r->m);
    r->done = true;
    r->inbox.clear();
}

void SimulationLayer::rt_step(const std::string& key, Runner& r, Time t_msg, const std::vector<PeerItem>& inputs) {
    while (true) {
        Time tl;
        Time tn;
        table_.with(key, [&](sim::Simulator& s) {
            tl = s.last_time();
            tn = s.next_time();
        });
        // a delivery stamped before our last event is taken at our own clock
        const Time t = inputs.empty() ? t_msg : std::max(t_msg, tl, [](Time a, Time b) { return a < b; });
        const bool catch_up = !inputs.empty() && tn < t;
        const Time at = catch_up ? tn : t;

        const auto lag = Clock::now() - r.wall_of(at);
        if (lag > std::chrono::milliseconds(50)) {
            ++r.late;
            spdlog::warn("{}: transition at t={} runs {} ms late", key, at.to_string(),
                         std::chrono::duration_cast<std::chrono::milliseconds>(lag).count());
        }

        MessageBag out;
        std::string phase;
        table_.with(key, [&](sim::Simulator& s) {
            s.lambda(at);
            out = s.output();
            if (!catch_up) {
                for (const auto& item : inputs) s.receive_input(item.from_port, item.value, item.to_port);
            }
            s.deltfcn(at);
            phase = s.model().phase();
        });
        touch(key);
        {
            std::lock_guard lock(r.m);
            ++r.transitions;
        }
        if (!out.empty()) {
            log_transition(key, out, phase);
            deliver(key, r, at, out);
        }
        if (!catch_up) return;
    }
}

void SimulationLayer::deliver(const std::string& key, Runner& r, Time t, const MessageBag& out) {
    std::vector<PeerRoute> routes;
    {
        std::lock_guard lock(r.m);
        routes = r.routes;
    }
    std::vector<std::pair<PeerRoute, std::vector<PeerItem>>> groups;
    for (const auto& item : out) {
        bool routed = false;
        for (const auto& route : routes) {
            if (route.out_port != item.port) continue;
            routed = true;
            PeerItem pi{item.port, route.in_port, registry_->translation(route.translation)(item.value)};
            auto g = std::find_if(groups.begin(), groups.end(), [&](const auto& e) {
                return e.first.endpoint == route.endpoint && e.first.key == route.key;
            });
            if (g == groups.end()) {
                groups.emplace_back(route, std::vector<PeerItem>{});
                g = std::prev(groups.end());
            }
            g->second.push_back(std::move(pi));
        }
        if (!routed) spdlog::debug("{}: output on {} has no peer route", key, item.port);
    }
    for (auto& [route, items] : groups) {
        counters_.peer_sent += items.size();
        try {
            if (route.endpoint == address_) {
                peer_input(route.key, t, std::move(items));
                continue;
            }
            proto::Envelope env;
            env.service = "receiveInput";
            env.key = proto::parse_key(route.key);
            env.time = t;
            env.body = json{{"peer", true}, {"items", items_to_json(items)}};
            transport_->call(route.endpoint, "/sim/receiveInput", env);
        } catch (const std::exception& e) {
            spdlog::warn("{}: peer delivery to {} at {} failed: {}", key, route.key, route.endpoint, e.what());
        }
    }
}

std::size_t SimulationLayer::sweep_idle(std::chrono::steady_clock::duration max_idle) {
    const auto now = std::chrono::steady_clock::now();
    std::set<std::string> idle;
    {
        std::lock_guard lock(log_mutex_);
        for (const auto& [client, seen] : last_seen_) {
            if (now - seen > max_idle) idle.insert(client);
        }
    }
    std::size_t removed = 0;
    for (const auto& key : table_.keys()) {
        if (!idle.count(proto::parse_key(key).client_address)) continue;
        if (auto r = runner(key)) {
            std::lock_guard lock(r->m);
            if (r->started && !r->done) continue;
        }
        try {
            exit(key);
            ++removed;
            spdlog::info("removed idle simulator {}", key);
        } catch (const Error&) {
        }
    }
    return removed;
}

json SimulationLayer::diagnostics() const {
    json counters{{"coordinatorRelayed", counters_.coordinator_relayed.load()},
                  {"peerSent", counters_.peer_sent.load()},
                  {"peerReceived", counters_.peer_received.load()},
                  {"inputsReceived", counters_.inputs_received.load()}};
    json created = json::object();
    {
        std::lock_guard lock(log_mutex_);
        for (const auto& [client, keys] : created_) created[client] = keys;
    }
    json rt = json::object();
    {
        std::lock_guard lock(rt_mutex_);
        for (const auto& [key, r] : runners_) {
            std::lock_guard rl(r->m);
            rt[key] = json{{"running", r->started && !r->done},
                           {"transitions", r->transitions},
                           {"late", r->late},
                           {"dropped", r->dropped}};
        }
    }
    return json{{"address", address_}, {"keys", table_.keys()}, {"created", created}, {"counters", counters},
                {"realTime", rt}};
}

} // namespace devs::node
