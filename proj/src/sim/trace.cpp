#include "devs/sim/trace.hpp"

namespace devs::sim {

std::string TraceEvent::render() const {
    return "t=" + time.to_string() + " " + component + " " + port + " " + value.render();
}

std::vector<std::string> render_trace(const std::vector<TraceEvent>& trace) {
    std::vector<std::string> out;
    out.reserve(trace.size());
    for (const auto& e : trace) out.push_back(e.render());
    return out;
}

} // namespace devs::sim
