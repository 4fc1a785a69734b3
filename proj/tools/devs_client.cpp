#include "devs/client/client.hpp"
#include "devs/core/error.hpp"
#include "devs/models/builtin.hpp"
#include "devs/node/http.hpp"
#include "devs/proto/assignment.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"DEVS distributed simulation client"};
    app.require_subcommand(1);
    auto* run = app.add_subcommand("run", "upload, compile and simulate a model on a set of nodes");

    std::string servers_file;
    std::string mode = "centralized";
    std::string out_path;
    std::optional<std::uint64_t> iterations;
    std::optional<double> observe;
    std::optional<double> end_time;
    bool in_process = false;
    devs::client::ClientConfig config;

    run->add_option("--servers", servers_file, "file listing one host:port per line")->required();
    run->add_option("--model", config.manifest_path, "model manifest (*.devs.json)")->required();
    run->add_option("--assign", config.assign, "'auto' or an assignment file")->default_val("auto");
    run->add_option("--mode", mode, "centralized or rt")->check(CLI::IsMember({"centralized", "rt"}));
    auto* it_opt = run->add_option("--iterations", iterations, "coordinator cycles (centralized)");
    auto* ob_opt = run->add_option("--observe", observe, "wall-clock seconds to observe (rt)");
    it_opt->excludes(ob_opt);
    run->add_option("--out", out_path, "write the structured report here");
    run->add_flag("--stable-output", config.stable_output, "replace endpoints and the client address with fixed names");
    run->add_option("--client-addr", config.client_address, "address used in simulator keys (default: detected)");
    run->add_option("--timescale", config.timescale, "wall-clock seconds per model time unit (rt)");
    run->add_option("--end-time", end_time, "stop once the next event lies beyond this time (centralized)");
    run->add_flag("--in-process", in_process, "host the listed nodes inside this process");
    CLI11_PARSE(app, argc, argv);

    spdlog::set_level(spdlog::level::warn);
    try {
        std::ifstream in(servers_file);
        if (!in) throw devs::Error(devs::Errc::invalid_argument, "cannot read " + servers_file);
        std::stringstream ss;
        ss << in.rdbuf();
        config.servers = devs::proto::parse_server_list(ss.str());
        config.mode = mode == "rt" ? devs::client::Mode::real_time : devs::client::Mode::centralized;
        if (config.mode == devs::client::Mode::centralized) {
            if (!iterations) throw devs::Error(devs::Errc::invalid_argument, "--iterations is required in centralized mode");
            config.iterations = *iterations;
            config.end_time = end_time;
        } else {
            if (!observe || *observe <= 0) throw devs::Error(devs::Errc::invalid_argument, "--observe SECONDS is required in rt mode");
            config.observe_seconds = *observe;
        }

        devs::client::SimulationReport report;
        if (in_process) {
            devs::client::InProcessCluster cluster(config.servers, devs::models::builtin_registry());
            if (config.client_address.empty()) config.client_address = "127.0.0.1";
            report = devs::client::run(config, cluster.transport());
        } else {
            devs::node::HttpTransport transport;
            report = devs::client::run(config, transport);
        }
        if (config.stable_output) report = devs::client::stabilize(std::move(report));

        std::cout << devs::client::render_text(report) << std::flush;
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) throw devs::Error(devs::Errc::invalid_argument, "cannot write " + out_path);
            out << devs::client::render_json(report).dump(2) << "\n";
        }
        return report.completed ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "devs-client: " << e.what() << "\n";
        return 2;
    }
}
