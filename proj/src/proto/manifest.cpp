#include "devs/proto/manifest.hpp"

#include "devs/core/error.hpp"
#include "devs/proto/codec.hpp"
#include "json_util.hpp"

#include <map>
#include <set>

namespace devs::proto {

using namespace detail;

const ManifestModel* ModelManifest::find_model(std::string_view name) const {
    for (const auto& m : models) {
        if (m.name == name) return &m;
    }
    return nullptr;
}

namespace {

ManifestComponent parse_component(const json& j, const std::string& where) {
    expect_object(j, where);
    only_keys(j, {"name", "kind", "params", "model"}, where);
    ManifestComponent c;
    c.name = required_string(j, "name", where);
    const json* kind = optional_field(j, "kind");
    const json* model = optional_field(j, "model");
    if ((kind == nullptr) == (model == nullptr)) {
        schema_fail(where, "component needs exactly one of 'kind' or 'model'");
    }
    if (model) {
        if (optional_field(j, "params")) schema_fail(child(where, "params"), "a model reference takes no params");
        c.model = as_string(*model, child(where, "model"));
        if (c.model.empty()) schema_fail(child(where, "model"), "must be non-empty");
    } else {
        c.kind = as_string(*kind, child(where, "kind"));
        if (c.kind.empty()) schema_fail(child(where, "kind"), "must be non-empty");
        if (auto* p = optional_field(j, "params")) c.params = record_from_json(*p, child(where, "params"));
    }
    return c;
}

ManifestModel parse_model(const json& j, const std::string& where) {
    expect_object(j, where);
    only_keys(j, {"name", "inputs", "outputs", "components", "couplings"}, where);
    ManifestModel m;
    m.name = required_string(j, "name", where);
    if (auto* p = optional_field(j, "inputs")) m.inputs = string_list(*p, child(where, "inputs"));
    if (auto* p = optional_field(j, "outputs")) m.outputs = string_list(*p, child(where, "outputs"));
    const std::string cw = child(where, "components");
    const json& comps = expect_array(required_field(j, "components", where), cw);
    for (std::size_t i = 0; i < comps.size(); ++i) m.components.push_back(parse_component(comps[i], child(cw, i)));
    if (auto* p = optional_field(j, "couplings")) m.couplings = couplings_from_json(*p, child(where, "couplings"));
    return m;
}

json emit_model(const ManifestModel& m) {
    json comps = json::array();
    for (const auto& c : m.components) {
        if (c.is_coupled()) {
            comps.push_back(json{{"name", c.name}, {"model", c.model}});
        } else {
            comps.push_back(json{{"name", c.name}, {"kind", c.kind}, {"params", record_to_json(c.params)}});
        }
    }
    return json{{"name", m.name},
                {"inputs", m.inputs},
                {"outputs", m.outputs},
                {"components", std::move(comps)},
                {"couplings", couplings_to_json(m.couplings)}};
}

} // namespace

ModelManifest parse_manifest(std::string_view bytes) {
    json j;
    try {
        j = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw Error(Errc::schema_error, "/: malformed JSON at byte " + std::to_string(e.byte));
    }
    expect_object(j, "");
    only_keys(j, {"formatVersion", "packageName", "topModel", "models"}, "");

    ModelManifest m;
    const json& version = required_field(j, "formatVersion", "");
    if (!version.is_number_integer() || version.get<std::int64_t>() != manifest_format_version) {
        schema_fail("/formatVersion", "unsupported format version " + version.dump());
    }
    m.package_name = required_string(j, "packageName", "");
    if (m.package_name.empty()) schema_fail("/packageName", "must be non-empty");
    m.top_model = required_string(j, "topModel", "");

    const json& models = expect_array(required_field(j, "models", ""), "/models");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const std::string w = child(std::string("/models"), i);
        m.models.push_back(parse_model(models[i], w));
        if (!seen.insert(m.models.back().name).second) {
            schema_fail(child(w, "name"), "duplicate model '" + m.models.back().name + "'");
        }
    }
    if (!m.find_model(m.top_model)) schema_fail("/topModel", "no model named '" + m.top_model + "'");
    for (std::size_t i = 0; i < m.models.size(); ++i) {
        const auto& comps = m.models[i].components;
        for (std::size_t k = 0; k < comps.size(); ++k) {
            if (comps[k].is_coupled() && !m.find_model(comps[k].model)) {
                schema_fail("/models/" + std::to_string(i) + "/components/" + std::to_string(k) + "/model",
                            "no model named '" + comps[k].model + "'");
            }
        }
    }
    return m;
}

std::string emit_manifest(const ModelManifest& manifest) {
    json models = json::array();
    for (const auto& m : manifest.models) models.push_back(emit_model(m));
    json j{{"formatVersion", manifest.format_version},
           {"packageName", manifest.package_name},
           {"topModel", manifest.top_model},
           {"models", std::move(models)}};
    return j.dump(2, ' ', false, json::error_handler_t::strict) + "\n";
}

namespace {

struct Resolver {
    const ModelManifest& manifest;
    std::map<std::string, std::shared_ptr<const CoupledSpec>, std::less<>> done;
    std::vector<std::string> stack;

    std::shared_ptr<const CoupledSpec> resolve(std::string_view name) {
        if (auto it = done.find(name); it != done.end()) return it->second;
        const ManifestModel* m = manifest.find_model(name);
        if (!m) throw Error(Errc::not_found, "no model named '" + std::string(name) + "'");
        for (const auto& s : stack) {
            if (s == name) throw Error(Errc::schema_error, "/models: model '" + s + "' contains itself");
        }
        stack.emplace_back(name);

        auto spec = std::make_shared<CoupledSpec>();
        spec->name = m->name;
        spec->inputs = m->inputs;
        spec->outputs = m->outputs;
        spec->couplings = m->couplings;
        for (const auto& c : m->components) {
            ComponentSpec comp;
            comp.name = c.name;
            if (c.is_coupled()) {
                comp.model = resolve(c.model);
            } else {
                comp.model = AtomicModelRef{c.kind, c.params};
            }
            spec->components.push_back(std::move(comp));
        }

        stack.pop_back();
        done.emplace(std::string(name), spec);
        return spec;
    }
};

void collect(const CoupledSpec& spec, ModelManifest& out) {
    if (out.find_model(spec.name)) return;
    ManifestModel m;
    m.name = spec.name;
    m.inputs = spec.inputs;
    m.outputs = spec.outputs;
    m.couplings = spec.couplings;
    for (const auto& c : spec.components) {
        ManifestComponent mc;
        mc.name = c.name;
        if (c.is_coupled()) {
            mc.model = c.coupled().name;
        } else {
            mc.kind = c.atomic().kind;
            mc.params = c.atomic().params;
        }
        m.components.push_back(std::move(mc));
    }
    out.models.push_back(std::move(m));
    for (const auto& c : spec.components) {
        if (c.is_coupled()) collect(c.coupled(), out);
    }
}

} // namespace

std::shared_ptr<const CoupledSpec> resolve_model(const ModelManifest& manifest, std::string_view model_name) {
    return Resolver{manifest, {}, {}}.resolve(model_name);
}

ModelManifest manifest_from_spec(const CoupledSpec& spec, std::string package_name) {
    ModelManifest out;
    out.package_name = std::move(package_name);
    out.top_model = spec.name;
    collect(spec, out);
    if (!(*resolve_model(out, spec.name) == spec)) {
        throw Error(Errc::schema_error, "/models: two different nested models share a name");
    }
    return out;
}

} // namespace devs::proto
