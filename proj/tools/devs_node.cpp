#include "devs/core/error.hpp"
#include "devs/core/plugin.hpp"
#include "devs/models/builtin.hpp"
#include "devs/node/http.hpp"
#include "devs/node/node.hpp"

#include <CLI11.hpp>
#include <dlfcn.h>
#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

namespace {

using RegisterFn = decltype(&devs_register);

void load_plugin(const std::string& path, devs::BehaviorRegistry& registry) {
    void* handle = ::dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
    if (!handle) throw devs::Error(devs::Errc::invalid_argument, std::string("cannot load plugin: ") + ::dlerror());
    auto fn = reinterpret_cast<RegisterFn>(::dlsym(handle, "devs_register"));
    if (!fn) throw devs::Error(devs::Errc::invalid_argument, path + " has no devs_register entry point");
    fn(registry);
    spdlog::info("loaded plugin {}", path);
}

void setup_logging(const std::string& level, const std::string& log_dir, int port) {
    std::vector<spdlog::sink_ptr> sinks{std::make_shared<spdlog::sinks::stderr_color_sink_mt>()};
    if (!log_dir.empty()) {
        std::filesystem::create_directories(log_dir);
        const auto file = std::filesystem::path(log_dir) / ("devs-node-" + std::to_string(port) + ".log");
        sinks.push_back(std::make_shared<spdlog::sinks::basic_file_sink_mt>(file.string()));
    }
    auto logger = std::make_shared<spdlog::logger>("devs-node", sinks.begin(), sinks.end());
    logger->set_level(spdlog::level::from_str(level));
    spdlog::set_default_logger(logger);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DEVS simulation node"};
    std::string listen = "127.0.0.1:8080";
    std::string advertise;
    std::vector<std::string> plugins;
    double idle_timeout = 600;
    std::string log_level = "info";
    std::string log_dir;
    app.add_option("--listen", listen, "host:port to listen on (port 0 picks a free one)");
    app.add_option("--advertise", advertise, "address peers use to reach this node (default: the bound address)");
    app.add_option("--plugin", plugins, "shared library exporting devs_register(BehaviorRegistry&)");
    app.add_option("--idle-timeout", idle_timeout, "seconds before an idle client's simulators are removed (0 = never)");
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error");
    app.add_option("--log-dir", log_dir, "also write logs to a file in this directory");
    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("DEVS_NODE_ADDR"); env && *env) listen = env;

    // SIGINT/SIGTERM are handled by a dedicated thread so the server can be
    // stopped outside signal context
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    try {
        const auto [host, port] = devs::node::split_endpoint(listen);
        devs::node::HttpServer server;
        const int bound = server.bind(host, port);
        setup_logging(log_level, log_dir, bound);

        auto registry = std::make_shared<devs::BehaviorRegistry>();
        devs::models::register_builtin_behaviors(*registry);
        for (const auto& p : plugins) load_plugin(p, *registry);

        devs::node::NodeConfig config;
        config.address = advertise.empty() ? host + ":" + std::to_string(bound) : advertise;
        config.registry = registry;
        config.transport = std::make_shared<devs::node::HttpTransport>();
        config.idle_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(idle_timeout * 1000));
        devs::node::Node node(config);

        std::thread waiter([&server, signals] {
            int sig = 0;
            sigwait(&signals, &sig);
            server.stop();
        });
        waiter.detach();

        std::cout << "listening on " << config.address << std::endl;
        spdlog::info("node {} serving {} behavior kinds", config.address, registry->kinds().size());
        server.serve(node);
        spdlog::info("node {} stopped", config.address);
    } catch (const std::exception& e) {
        std::cerr << "devs-node: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
