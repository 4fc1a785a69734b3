#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace devs {

class Payload;

/// Named fields of a record payload; keys are kept sorted.
using Record = std::map<std::string, Payload, std::less<>>;

/// Message value exchanged between models: a closed tagged union so the wire
/// form stays language neutral.
class Payload {
public:
    enum class Kind { text, integer, real, boolean, record };

    Payload() : value_(std::string{}) {}

    static Payload text(std::string s) { return Payload(Value(std::in_place_index<0>, std::move(s))); }
    static Payload integer(std::int64_t i) { return Payload(Value(std::in_place_index<1>, i)); }
    static Payload real(double d);
    static Payload boolean(bool b) { return Payload(Value(std::in_place_index<3>, b)); }
    static Payload record(Record fields) { return Payload(Value(std::in_place_index<4>, std::move(fields))); }

    Kind kind() const noexcept { return static_cast<Kind>(value_.index()); }
    bool is_text() const noexcept { return kind() == Kind::text; }
    bool is_record() const noexcept { return kind() == Kind::record; }

    const std::string& as_text() const;
    std::int64_t as_integer() const;
    double as_real() const;
    bool as_boolean() const;
    const Record& as_record() const;

    /// Numeric view accepting either integer or real.
    double as_number() const;

    /// Human-readable rendering used in console logs: text is printed raw,
    /// records as "{a: 1, b: x}".
    std::string render() const;

    friend bool operator==(const Payload& a, const Payload& b) { return a.value_ == b.value_; }
    friend bool operator<(const Payload& a, const Payload& b) { return a.value_ < b.value_; }

private:
    using Value = std::variant<std::string, std::int64_t, double, bool, Record>;
    explicit Payload(Value v) : value_(std::move(v)) {}

    Value value_;
};

std::string_view to_string(Payload::Kind kind) noexcept;

/// Parameter lookup helpers for behavior factories. Missing keys yield the
/// fallback; present keys of the wrong kind throw invalid_parameter.
double param_number(const Record& params, std::string_view key, double fallback);
std::int64_t param_integer(const Record& params, std::string_view key, std::int64_t fallback);
std::string param_text(const Record& params, std::string_view key, std::string fallback);
bool has_param(const Record& params, std::string_view key);

} // namespace devs
