#pragma once

#include "devs/core/coupled.hpp"
#include "devs/core/payload.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace devs::proto {

inline constexpr std::int64_t manifest_format_version = 1;
inline constexpr std::string_view manifest_extension = ".devs.json";

/// Component entry of a manifest model: either a behavior reference
/// (kind + params) or a reference to another model of the same manifest.
struct ManifestComponent {
    std::string name;
    std::string kind;
    Record params;
    std::string model;

    bool is_coupled() const noexcept { return !model.empty(); }
    friend bool operator==(const ManifestComponent&, const ManifestComponent&) = default;
};

struct ManifestModel {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<ManifestComponent> components;
    std::vector<Coupling> couplings;

    friend bool operator==(const ManifestModel&, const ManifestModel&) = default;
};

/// Declarative, language-neutral description of a coupled model hierarchy.
/// Behavior logic is referenced by kind id and never embedded.
struct ModelManifest {
    std::int64_t format_version = manifest_format_version;
    std::string package_name;
    std::string top_model;
    std::vector<ManifestModel> models;

    const ManifestModel* find_model(std::string_view name) const;
    friend bool operator==(const ModelManifest&, const ModelManifest&) = default;
};

/// Schema-checked parse. Throws schema_error whose message starts with a
/// JSON-pointer locator ("/models/0/components/2/kind: ...").
ModelManifest parse_manifest(std::string_view bytes);

/// Pretty-printed canonical JSON (sorted keys, two-space indent).
std::string emit_manifest(const ModelManifest& manifest);

/// Builds the coupled model tree rooted at `model_name`. Throws not_found for an
/// undefined model, schema_error for reference cycles.
std::shared_ptr<const CoupledSpec> resolve_model(const ModelManifest& manifest, std::string_view model_name);

/// Manifest whose single model tree is `spec` (nested coupled components
/// become sibling model entries).
ModelManifest manifest_from_spec(const CoupledSpec& spec, std::string package_name);

} // namespace devs::proto
