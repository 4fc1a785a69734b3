// Acceptance run: one PASS/FAIL line per criterion, each with its time limit.
// Criteria 3 to 6 and 8 start real devs-node processes on localhost and drive
// them with the devs-client binary.

#include "devs/core/error.hpp"
#include "devs/models/builtin.hpp"
#include "devs/node/http.hpp"
#include "devs/proto/assignment.hpp"
#include "devs/proto/codec.hpp"
#include "devs/proto/envelope.hpp"
#include "devs/proto/key.hpp"
#include "devs/proto/manifest.hpp"
#include "devs/sim/coordinator.hpp"
#include "devs/sim/digraph.hpp"
#include "closure.hpp"
#include "fixtures.hpp"
#include "node_process.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <regex>
#include <set>
#include <sstream>

using namespace devs;
using proto::json;

namespace {

namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Failed : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failed(what);
}

class Workdir {
public:
    Workdir() {
        path_ = fs::temp_directory_path() / ("devs_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(path_);
    }
    ~Workdir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    std::string write(const std::string& name, const std::string& content) const {
        const auto p = path_ / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

struct Cluster {
    std::vector<std::unique_ptr<testing::NodeProcess>> nodes;
    std::vector<std::string> endpoints;

    explicit Cluster(int n) {
        for (int i = 0; i < n; ++i) {
            nodes.push_back(std::make_unique<testing::NodeProcess>(DEVS_NODE_BIN));
            endpoints.push_back(nodes.back()->endpoint());
        }
    }
    std::string server_file(const Workdir& w, const std::string& name) const {
        std::string text;
        for (const auto& ep : endpoints) text += ep + "\n";
        return w.write(name, text);
    }
};

struct ClientRun {
    int exit_code = -1;
    std::string text;
    json report;
};

ClientRun run_client(const Workdir& w, const std::string& servers_file, const std::string& manifest,
                     const std::string& extra, const std::string& tag) {
    const std::string out = w.file(tag + ".json");
    const std::string cmd = std::string(DEVS_CLIENT_BIN) + " run --servers " + servers_file + " --model " + manifest +
                            " --stable-output --out " + out + " " + extra + " 2>&1";
    const auto r = testing::run_command(cmd);
    ClientRun run;
    run.exit_code = r.exit_code;
    run.text = r.output;
    try {
        run.report = json::parse(testing::read_file(out));
    } catch (const std::exception&) {
        throw Failed("client produced no report (exit " + std::to_string(r.exit_code) + "): " + r.output);
    }
    return run;
}

json diagnostics(node::Transport& t, const std::string& endpoint) {
    proto::Envelope env;
    env.service = "diagnostics";
    return t.call(endpoint, "/sim/diagnostics", env).body;
}

// Every behavior the nodes ship, plus the bundled coupled models presented
// as atomic behaviors.
std::vector<std::pair<std::string, std::function<std::unique_ptr<AtomicBehavior>()>>> bundled_behaviors(
    const std::shared_ptr<const BehaviorRegistry>& reg) {
    std::vector<std::pair<std::string, std::function<std::unique_ptr<AtomicBehavior>()>>> out;
    for (const auto& kind : reg->kinds()) {
        out.emplace_back(kind, [reg, kind] { return reg->instantiate(kind, {}); });
    }
    for (const char* file : {"jcas.devs.json", "ef-pipeline.devs.json"}) {
        const auto m = testing::load_manifest(file);
        for (const auto& model : m.models) {
            auto spec = proto::resolve_model(m, model.name);
            out.emplace_back("coupled " + model.name, [reg, spec] { return sim::digraph_to_atomic(*spec, *reg); });
        }
    }
    return out;
}

MessageBag random_input(std::mt19937& rng, const AtomicBehavior& b) {
    static const std::vector<Payload> values = {Payload::text("Job#1"), Payload::text("Job#2"),
                                                Payload::text("initialAttack"), Payload::text("ceaseAttack"),
                                                Payload::text("getReady"), Payload::integer(1)};
    std::vector<std::string> ports(b.input_ports().begin(), b.input_ports().end());
    MessageBag bag;
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < n; ++i) {
        bag.add(ports[rng() % ports.size()], values[rng() % values.size()]);
    }
    return bag;
}

Outcome confluent_identity() {
    auto reg = models::builtin_registry();
    std::mt19937 rng(2024);
    std::size_t behaviors = 0;
    for (const auto& [name, make] : bundled_behaviors(reg)) {
        int states = 0;
        int attempts = 0;
        while (states < 200) {
            require(++attempts < 20000, name + ": could not reach 200 states");
            auto b = make();
            const int steps = std::uniform_int_distribution<int>(0, 15)(rng);
            for (int i = 0; i < steps; ++i) {
                const bool can_ext = !b->input_ports().empty();
                if (b->ta().is_finite() && (!can_ext || rng() % 2 == 0)) {
                    b->delta_int();
                } else if (can_ext) {
                    const double cap = b->ta().is_infinite() ? 2.0 : b->ta().value();
                    b->delta_ext(Time(cap * (rng() % 5) / 4.0), random_input(rng, *b));
                }
            }
            // a coupled model only has an internal transition when imminent
            if (name.starts_with("coupled") && b->ta().is_infinite()) continue;
            auto con = b->clone();
            con->delta_con(MessageBag{});
            b->delta_int();
            require(con->snapshot() == b->snapshot(), name + ": delta_con(s, empty) differs from delta_int(s)");
            ++states;
        }
        ++behaviors;
    }
    return {true, std::to_string(behaviors) + " behaviors x 200 states"};
}

Outcome closure_under_coupling() {
    auto reg = testing::full_registry();
    std::mt19937 rng(4242);
    std::size_t events = 0;
    for (int i = 0; i < 100; ++i) {
        const auto root = testing::random_two_level(rng);
        require(root->components.size() <= 5, "generator made more than five components");
        const double horizon = testing::horizon_for(*root, *reg, 20, 40.0);
        const auto hierarchical = testing::run_coordinated(root, reg, horizon);
        const auto wrapped = testing::run_wrapped(*root, *reg, horizon);
        const auto flat = testing::FlatOracle(*root, *reg).run(horizon);
        require(hierarchical == wrapped, "model " + std::to_string(i) + ": hierarchical and wrapped traces differ");
        require(hierarchical == flat, "model " + std::to_string(i) + ": traces differ from the flat oracle");
        events += testing::event_count(flat);
    }
    return {true, "100 models, " + std::to_string(events) + " output events"};
}

Outcome distributed_equals_in_process(const Workdir& w) {
    std::string detail;
    for (const char* model : {"ef-pipeline.devs.json", "jcas.devs.json"}) {
        const std::string manifest = testing::manifest_path(model);
        const std::string args = "--iterations 40";
        const auto local_servers = w.write("inproc.txt", "127.0.0.1:1\n");
        const auto local = run_client(w, local_servers, manifest, args + " --in-process", "inproc");
        require(local.exit_code == 0, std::string(model) + ": in-process run failed: " + local.text);
        const auto reference = local.report["trace"].dump();
        require(local.report["trace"].size() > 5, std::string(model) + ": in-process trace is too short");
        for (int n : {2, 3}) {
            Cluster c(n);
            const auto run = run_client(w, c.server_file(w, "servers.txt"), manifest, args, "dist");
            require(run.exit_code == 0, std::string(model) + " on " + std::to_string(n) + " nodes failed: " + run.text);
            require(run.report["trace"].dump() == reference,
                    std::string(model) + ": trace on " + std::to_string(n) + " nodes differs from in-process");
            require(run.report["iterations"] == local.report["iterations"], "iteration counts differ");
        }
        detail += std::string(detail.empty() ? "" : ", ") + model + " " + std::to_string(local.report["trace"].size()) +
                  " events";
    }
    return {true, detail + "; identical on 1, 2 and 3 nodes"};
}

Outcome round_robin_spread(const Workdir& w) {
    proto::ModelManifest m;
    m.package_name = "spread";
    m.top_model = "Spread";
    proto::ManifestModel top;
    top.name = "Spread";
    for (int i = 0; i < 10; ++i) {
        top.components.push_back({"gen" + std::to_string(i), "ef.generator", {{"period", Payload::integer(i + 1)}}, ""});
    }
    m.models.push_back(top);
    const auto manifest = w.write("spread.devs.json", proto::emit_manifest(m));

    Cluster c(5);
    node::HttpTransport t;
    const auto run = run_client(w, c.server_file(w, "servers.txt"), manifest, "--iterations 3 --client-addr 10.20.30.40", "spread");
    require(run.exit_code == 0, "run failed: " + run.text);
    std::string counts;
    for (const auto& ep : c.endpoints) {
        const auto d = diagnostics(t, ep);
        const auto created = d["created"].value("10.20.30.40", json::array());
        counts += std::to_string(created.size());
        require(created.size() == 2, ep + " created " + std::to_string(created.size()) + " simulators");
        require(d["keys"].empty(), ep + " kept simulators after the run");
    }
    return {true, "per-node simulator counts " + counts};
}

Outcome jcas_golden(const Workdir& w) {
    Cluster c(2);
    proto::AssignmentMap a;
    for (const char* comp : {"JCASNum1", "USMCAircraft", "CAOCobserver"}) a[comp] = c.endpoints[1];
    for (const char* comp : {"UAV", "CAOC", "JTAC", "AWACS"}) a[comp] = c.endpoints[0];
    const auto assign = w.write("jcas.assign.json", proto::emit_assignment(a));
    const auto run = run_client(w, c.server_file(w, "servers.txt"), testing::manifest_path("jcas.devs.json"),
                                "--assign " + assign + " --iterations 100", "golden");
    require(run.exit_code == 0, "run failed: " + run.text);

    auto normalize = [](const std::string& text) {
        std::istringstream in(text);
        std::string line, out;
        while (std::getline(in, line)) {
            line = std::regex_replace(line, std::regex("\\s+"), " ");
            line = std::regex_replace(line, std::regex("^ | $"), "");
            out += line + "\n";
        }
        return out;
    };
    const auto golden = normalize(testing::read_file(testing::source_path("tests/acceptance/jcas_golden.txt")));
    const auto actual = normalize(run.text);
    if (actual != golden) {
        std::cerr << "---- expected\n" << golden << "---- actual\n" << actual;
        throw Failed("console differs from the golden trace");
    }
    require(run.report["iterations"] == 11, "iteration count");
    const json expected_phase{{"JTAC", "passive"}, {"AWACS", "doSurveillance"}, {"CAOC", "passive"},
                              {"UAV", "passive"}, {"USMCAircraft", "attack"}};
    for (const auto& [comp, phase] : expected_phase.items()) {
        require(run.report["finalStates"][comp]["phase"] == phase, comp + " ends in the wrong phase");
    }
    return {true, "11 iterations, golden console matched, terminal phases matched"};
}

Outcome rt_peer_routing(const Workdir& w) {
    const double observe = 3.0;
    const double period = 1.0;

    // centralized run of the same logical horizon, in this process
    auto reg = testing::full_registry();
    const auto root = testing::load_top("ef-pipeline.devs.json");
    sim::SimulatorTable table(reg);
    std::map<std::string, sim::SimulationService*> placement;
    for (const auto& comp : root->components) placement[comp.name] = &table;
    sim::Coordinator coord("ref", root, placement, reg);
    coord.create_simulators();
    coord.initialize(Time::zero());
    coord.simulate(1000, Time(observe));
    const auto ref = coord.collect_states();
    coord.exit();

    Cluster c(2);
    const auto started = std::chrono::steady_clock::now();
    const auto run = run_client(w, c.server_file(w, "servers.txt"), testing::manifest_path("ef-pipeline.devs.json"),
                                "--mode rt --observe 3 --timescale 1", "rt");
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    require(run.exit_code == 0, "rt run failed: " + run.text);

    node::HttpTransport t;
    std::uint64_t relayed = 0, peer = 0;
    for (const auto& ep : c.endpoints) {
        const auto d = diagnostics(t, ep);
        relayed += d["counters"]["coordinatorRelayed"].get<std::uint64_t>();
        peer += d["counters"]["peerReceived"].get<std::uint64_t>();
    }
    require(relayed == 0, "coordinator relayed " + std::to_string(relayed) + " messages");
    require(run.report["relayed"] == 0, "report shows relayed content");
    require(peer > 0, "no peer deliveries observed");

    const auto& states = run.report["finalStates"];
    const auto emitted = states["gen"]["state"]["emitted"].get<std::int64_t>();
    const auto expected = static_cast<std::int64_t>(std::floor(observe / period));
    require(std::llabs(emitted - expected) <= 1, "generator emitted " + std::to_string(emitted));
    const auto& tr = states["transducer"]["state"];
    const auto& rtr = ref.at("transducer").as_record();
    require(tr["jobsSent"] == rtr.at("jobsSent").as_integer(), "transducer arrivals differ from the centralized run");
    require(tr["jobsReceived"] == rtr.at("jobsReceived").as_integer(),
            "transducer solved count differs from the centralized run");

    std::ostringstream d;
    d << "relay 0, " << peer << " peer deliveries, " << emitted << " jobs, transducer " << tr["jobsSent"] << "/"
      << tr["jobsReceived"] << ", run took " << std::round(wall * 100) / 100 << " s";
    return {true, d.str()};
}

Payload random_payload(std::mt19937& rng, int depth = 0) {
    switch (rng() % (depth < 2 ? 5 : 4)) {
    case 0: return Payload::text("s" + std::to_string(rng() % 1000) + (rng() % 3 == 0 ? " \"q\"\né" : ""));
    case 1: return Payload::integer(static_cast<std::int64_t>(rng()) - (1ll << 31));
    case 2: return Payload::real(std::uniform_real_distribution<double>(-1e6, 1e6)(rng));
    case 3: return Payload::boolean(rng() % 2 == 0);
    default: {
        Record r;
        for (unsigned i = 0; i < rng() % 4; ++i) r.emplace("f" + std::to_string(rng() % 50), random_payload(rng, depth + 1));
        return Payload::record(std::move(r));
    }
    }
}

Outcome wire_stability() {
    std::mt19937 rng(777);
    for (int i = 0; i < 1000; ++i) {
        proto::Envelope e;
        e.service = "/sim/op" + std::to_string(rng() % 20);
        if (rng() % 4) e.key = proto::SimulatorKey{"C" + std::to_string(rng() % 50), "10.0." + std::to_string(rng() % 9) + ".1"};
        if (rng() % 4) e.time = rng() % 10 == 0 ? Time::infinity() : Time((rng() % 100000) / 64.0);
        MessageBag bag;
        for (unsigned k = 0; k < rng() % 5; ++k) bag.add("p" + std::to_string(rng() % 3), random_payload(rng));
        e.body = json{{"bag", proto::bag_to_json(bag)}};
        if (rng() % 2) e.request_id = std::to_string(rng());

        const auto bytes = proto::encode_envelope(e);
        const auto back = proto::decode_envelope(bytes);
        require(back == e, "envelope " + std::to_string(i) + " did not survive decoding");
        require(proto::encode_envelope(back) == bytes, "envelope " + std::to_string(i) + " re-encoded differently");
        // canonical: sorted keys, no insignificant whitespace
        require(json::parse(bytes).dump() == bytes, "envelope " + std::to_string(i) + " is not canonical");
    }
    for (int i = 0; i < 1000; ++i) {
        auto spec = std::const_pointer_cast<CoupledSpec>(testing::random_two_level(rng));
        for (auto& comp : spec->components) {
            if (!comp.is_coupled()) std::get<0>(comp.model).params["note"] = random_payload(rng);
        }
        const auto m = proto::manifest_from_spec(*spec, "pkg" + std::to_string(i));
        const auto text = proto::emit_manifest(m);
        const auto parsed = proto::parse_manifest(text);
        require(parsed == m, "manifest " + std::to_string(i) + " did not survive parsing");
        require(proto::emit_manifest(parsed) == text, "manifest " + std::to_string(i) + " re-emitted differently");
        require(json::parse(text).dump(2) + "\n" == text, "manifest " + std::to_string(i) + " is not canonical");
        require(*proto::resolve_model(parsed, spec->name) == *spec, "manifest " + std::to_string(i) + " resolves differently");
    }
    return {true, "1000 envelopes and 1000 manifests"};
}

Outcome simulator_naming(const Workdir& w) {
    require(proto::render_key("Processor", "192.168.1.2") == "Processor@192.168.1.2", "key rendering");
    Cluster c(2);
    const auto run = run_client(w, c.server_file(w, "servers.txt"), testing::manifest_path("jcas.devs.json"),
                                "--iterations 100 --client-addr 192.168.1.2", "naming");
    require(run.exit_code == 0, "run failed: " + run.text);
    node::HttpTransport t;
    const std::regex form("^[A-Za-z][A-Za-z0-9_]*@192\\.168\\.1\\.2$");
    std::set<std::string> seen;
    for (const auto& ep : c.endpoints) {
        const auto d = diagnostics(t, ep);
        const auto created = d["created"].value("192.168.1.2", json::array());
        for (const auto& key : created) {
            const auto k = key.get<std::string>();
            require(std::regex_match(k, form), "malformed key " + k);
            seen.insert(k);
        }
    }
    std::set<std::string> expected;
    const auto top = testing::load_top("jcas.devs.json");
    for (const auto& comp : top->components) expected.insert(comp.name + "@192.168.1.2");
    require(seen == expected, "diagnostics list " + std::to_string(seen.size()) + " of 7 keys");
    return {true, "7 keys such as " + *seen.begin()};
}

} // namespace

int main(int argc, char** argv) {
    // optional criterion ids select a subset
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    spdlog::set_level(spdlog::level::warn);
    Workdir w;
    struct Criterion {
        int id;
        std::string name;
        double limit;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "confluent identity", 5, confluent_identity},
        {2, "closure under coupling", 30, closure_under_coupling},
        {3, "distributed equals in-process", 60, [&] { return distributed_equals_in_process(w); }},
        {4, "round-robin spread", 30, [&] { return round_robin_spread(w); }},
        {5, "close air support golden trace", 30, [&] { return jcas_golden(w); }},
        {6, "real-time peer routing", 10, [&] { return rt_peer_routing(w); }},
        {7, "wire stability", 10, wire_stability},
        {8, "simulator naming", 30, [&] { return simulator_naming(w); }},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.pass && secs > c.limit) {
            o.pass = false;
            o.detail += "; over the time limit";
        }
        if (!o.pass) ++failures;
        std::printf("criterion %d %-32s %s  %.2fs (limit %.0fs)  %s\n", c.id, c.name.c_str(), o.pass ? "PASS" : "FAIL",
                    secs, c.limit, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
