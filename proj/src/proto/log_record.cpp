#include "devs/proto/log_record.hpp"

#include "json_util.hpp"

namespace devs::proto {

using namespace detail;

json log_to_json(const LogRecord& log) {
    return json{{"node", log.node_address}, {"client", log.client_address}, {"lines", log.lines}};
}

LogRecord log_from_json(const json& j) {
    expect_object(j, "");
    LogRecord out;
    out.node_address = required_string(j, "node", "");
    out.client_address = required_string(j, "client", "");
    out.lines = string_list(required_field(j, "lines", ""), "/lines");
    return out;
}

} // namespace devs::proto
