#pragma once

#include "devs/core/error.hpp"
#include "devs/proto/codec.hpp"

#include <initializer_list>
#include <string>
#include <string_view>

namespace devs::proto::detail {

[[noreturn]] inline void schema_fail(const std::string& where, const std::string& what) {
    throw Error(Errc::schema_error, (where.empty() ? std::string("/") : where) + ": " + what);
}

inline std::string child(const std::string& where, std::string_view key) {
    return where + "/" + std::string(key);
}

inline std::string child(const std::string& where, std::size_t index) {
    return where + "/" + std::to_string(index);
}

inline const json& expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) schema_fail(where, "expected an object");
    return j;
}

inline const json& expect_array(const json& j, const std::string& where) {
    if (!j.is_array()) schema_fail(where, "expected an array");
    return j;
}

inline void only_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || a == key;
        if (!ok) schema_fail(child(where, key), "unknown field '" + key + "'");
    }
}

inline const json* optional_field(const json& j, std::string_view key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

inline const json& required_field(const json& j, std::string_view key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) schema_fail(child(where, key), "missing required field '" + std::string(key) + "'");
    return *it;
}

inline std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) schema_fail(where, "expected a string");
    return j.get<std::string>();
}

inline std::string required_string(const json& j, std::string_view key, const std::string& where) {
    return as_string(required_field(j, key, where), child(where, key));
}

inline std::vector<std::string> string_list(const json& j, const std::string& where) {
    expect_array(j, where);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], child(where, i)));
    return out;
}

json couplings_to_json(const std::vector<Coupling>& couplings);
std::vector<Coupling> couplings_from_json(const json& j, const std::string& where);

} // namespace devs::proto::detail
