#pragma once

#include <compare>
#include <limits>
#include <string>

namespace devs {

/// Logical simulation time: a non-negative real or +infinity.
///
/// Infinity absorbs addition and orders after every finite value. Arithmetic
/// that would leave the domain (negative results, inf - inf) throws
/// Error{Errc::invalid_time}.
class Time {
public:
    constexpr Time() noexcept = default;
    explicit Time(double value);

    static constexpr Time infinity() noexcept { return Time(Raw{}, std::numeric_limits<double>::infinity()); }
    static constexpr Time zero() noexcept { return Time{}; }

    constexpr bool is_infinite() const noexcept { return value_ == std::numeric_limits<double>::infinity(); }
    constexpr bool is_finite() const noexcept { return !is_infinite(); }
    constexpr double value() const noexcept { return value_; }

    /// "inf" for infinity, otherwise the shortest decimal that round-trips.
    std::string to_string() const;

    friend constexpr bool operator==(Time a, Time b) noexcept { return a.value_ == b.value_; }
    friend constexpr std::partial_ordering operator<=>(Time a, Time b) noexcept { return a.value_ <=> b.value_; }

    friend Time operator+(Time a, Time b);
    friend Time operator-(Time a, Time b);
    Time& operator+=(Time other) { return *this = *this + other; }

private:
    struct Raw {};
    constexpr Time(Raw, double v) noexcept : value_(v) {}

    double value_ = 0.0;
};

inline Time min(Time a, Time b) noexcept { return b < a ? b : a; }

} // namespace devs
