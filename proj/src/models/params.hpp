#pragma once

#include "devs/core/error.hpp"
#include "devs/core/payload.hpp"
#include "devs/core/time.hpp"

#include <cmath>
#include <string>

namespace devs::models::detail {

inline Time positive_duration(const Record& params, std::string_view key, double fallback) {
    const double v = param_number(params, key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(Errc::invalid_parameter, "parameter '" + std::string(key) + "' must be a positive finite number");
    }
    return Time(v);
}

} // namespace devs::models::detail
