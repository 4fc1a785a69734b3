#pragma once

#include "devs/proto/codec.hpp"

#include <string>
#include <vector>

namespace devs::proto {

/// Console log a node keeps for one client, in emission order.
struct LogRecord {
    std::string node_address;
    std::string client_address;
    std::vector<std::string> lines;

    friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

json log_to_json(const LogRecord& log);
LogRecord log_from_json(const json& j);

} // namespace devs::proto
