#pragma once

#include "devs/core/registry.hpp"
#include "devs/models/builtin.hpp"
#include "devs/proto/manifest.hpp"
#include "test_behaviors.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace devs::testing {

inline std::string source_path(const std::string& relative) { return std::string(DEVS_SOURCE_DIR) + "/" + relative; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Bundled manifests live next to the example corpus.
inline std::string manifest_path(const std::string& name) { return source_path("examples/" + name); }

inline proto::ModelManifest load_manifest(const std::string& name) {
    return proto::parse_manifest(read_file(manifest_path(name)));
}

inline std::shared_ptr<const CoupledSpec> load_top(const std::string& name) {
    const auto m = load_manifest(name);
    return proto::resolve_model(m, m.top_model);
}

inline std::shared_ptr<BehaviorRegistry> full_registry() {
    auto r = std::make_shared<BehaviorRegistry>();
    models::register_builtin_behaviors(*r);
    register_test_behaviors(*r);
    return r;
}

} // namespace devs::testing
