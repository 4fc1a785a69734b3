#include "devs/core/payload.hpp"

#include "devs/core/error.hpp"

#include <charconv>
#include <cmath>

namespace devs {

namespace {

[[noreturn]] void wrong_kind(Payload::Kind have, std::string_view want) {
    throw Error(Errc::invalid_argument,
                "payload is " + std::string(to_string(have)) + ", expected " + std::string(want));
}

std::string render_real(double d) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, end);
}

} // namespace

Payload Payload::real(double d) {
    if (!std::isfinite(d)) {
        throw Error(Errc::invalid_argument, "real payloads must be finite");
    }
    if (d == 0.0) d = 0.0;
    return Payload(Value(std::in_place_index<2>, d));
}

const std::string& Payload::as_text() const {
    if (auto* p = std::get_if<0>(&value_)) return *p;
    wrong_kind(kind(), "text");
}

std::int64_t Payload::as_integer() const {
    if (auto* p = std::get_if<1>(&value_)) return *p;
    wrong_kind(kind(), "integer");
}

double Payload::as_real() const {
    if (auto* p = std::get_if<2>(&value_)) return *p;
    wrong_kind(kind(), "real");
}

bool Payload::as_boolean() const {
    if (auto* p = std::get_if<3>(&value_)) return *p;
    wrong_kind(kind(), "boolean");
}

const Record& Payload::as_record() const {
    if (auto* p = std::get_if<4>(&value_)) return *p;
    wrong_kind(kind(), "record");
}

double Payload::as_number() const {
    if (auto* p = std::get_if<1>(&value_)) return static_cast<double>(*p);
    if (auto* p = std::get_if<2>(&value_)) return *p;
    wrong_kind(kind(), "number");
}

std::string Payload::render() const {
    switch (kind()) {
    case Kind::text: return std::get<0>(value_);
    case Kind::integer: return std::to_string(std::get<1>(value_));
    case Kind::real: return render_real(std::get<2>(value_));
    case Kind::boolean: return std::get<3>(value_) ? "true" : "false";
    case Kind::record: {
        std::string out = "{";
        bool first = true;
        for (const auto& [key, value] : std::get<4>(value_)) {
            if (!first) out += ", ";
            first = false;
            out += key;
            out += ": ";
            out += value.render();
        }
        return out + "}";
    }
    }
    return {};
}

std::string_view to_string(Payload::Kind kind) noexcept {
    switch (kind) {
    case Payload::Kind::text: return "text";
    case Payload::Kind::integer: return "integer";
    case Payload::Kind::real: return "real";
    case Payload::Kind::boolean: return "boolean";
    case Payload::Kind::record: return "record";
    }
    return "unknown";
}

bool has_param(const Record& params, std::string_view key) {
    return params.find(key) != params.end();
}

double param_number(const Record& params, std::string_view key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    const auto k = it->second.kind();
    if (k != Payload::Kind::integer && k != Payload::Kind::real) {
        throw Error(Errc::invalid_parameter, "parameter '" + std::string(key) + "' must be numeric");
    }
    return it->second.as_number();
}

std::int64_t param_integer(const Record& params, std::string_view key, std::int64_t fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (it->second.kind() != Payload::Kind::integer) {
        throw Error(Errc::invalid_parameter, "parameter '" + std::string(key) + "' must be an integer");
    }
    return it->second.as_integer();
}

std::string param_text(const Record& params, std::string_view key, std::string fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (!it->second.is_text()) {
        throw Error(Errc::invalid_parameter, "parameter '" + std::string(key) + "' must be text");
    }
    return it->second.as_text();
}

} // namespace devs
