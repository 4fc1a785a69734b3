#pragma once

#include "devs/core/payload.hpp"
#include "devs/core/time.hpp"

#include <string>
#include <vector>

namespace devs::sim {

/// One output item observed by a coordinator.
struct TraceEvent {
    Time time;
    std::string component;
    std::string port;
    Payload value;

    /// "t=3 CAOC readyOrderOut getReady"
    std::string render() const;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

std::vector<std::string> render_trace(const std::vector<TraceEvent>& trace);

} // namespace devs::sim
