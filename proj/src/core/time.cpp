#include "devs/core/time.hpp"

#include "devs/core/error.hpp"

#include <charconv>
#include <cmath>

namespace devs {

Time::Time(double value) : value_(value) {
    if (std::isnan(value) || value < 0.0) {
        throw Error(Errc::invalid_time, "time must be a non-negative real or +inf");
    }
    if (value == 0.0) value_ = 0.0; // drop a negative zero
}

std::string Time::to_string() const {
    if (is_infinite()) return "inf";
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value_);
    return std::string(buf, end);
}

Time operator+(Time a, Time b) {
    if (a.is_infinite() || b.is_infinite()) return Time::infinity();
    return Time(a.value_ + b.value_);
}

Time operator-(Time a, Time b) {
    if (b.is_infinite()) {
        throw Error(Errc::invalid_time, "cannot subtract infinity");
    }
    if (a.is_infinite()) return Time::infinity();
    if (a.value_ < b.value_) {
        throw Error(Errc::invalid_time, "negative duration " + a.to_string() + " - " + b.to_string());
    }
    return Time(a.value_ - b.value_);
}

} // namespace devs
