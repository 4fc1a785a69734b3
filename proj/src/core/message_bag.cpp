#include "devs/core/message_bag.hpp"

#include "devs/core/error.hpp"

#include <algorithm>

namespace devs {

bool operator<(const PortValue& a, const PortValue& b) {
    if (a.port != b.port) return a.port < b.port;
    return a.value < b.value;
}

MessageBag::MessageBag(std::initializer_list<PortValue> items) {
    for (const auto& item : items) add(item);
}

void MessageBag::add(std::string port, Payload value) {
    if (port.empty()) {
        throw Error(Errc::invalid_argument, "message port must be non-empty");
    }
    items_.push_back(PortValue{std::move(port), std::move(value)});
}

void MessageBag::append(const MessageBag& other) {
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

std::vector<Payload> MessageBag::values_on(std::string_view port) const {
    std::vector<Payload> out;
    for (const auto& item : items_) {
        if (item.port == port) out.push_back(item.value);
    }
    return out;
}

bool MessageBag::has_port(std::string_view port) const {
    return std::any_of(items_.begin(), items_.end(), [&](const PortValue& i) { return i.port == port; });
}

MessageBag MessageBag::grouped() const {
    MessageBag out = *this;
    std::stable_sort(out.items_.begin(), out.items_.end(),
                     [](const PortValue& a, const PortValue& b) { return a.port < b.port; });
    return out;
}

std::string MessageBag::render() const {
    std::string out = "<<";
    for (const auto& item : items_) {
        out += " port: ";
        out += item.port;
        out += " value: ";
        out += item.value.render();
    }
    return out + " >>";
}

bool operator==(const MessageBag& a, const MessageBag& b) {
    if (a.items_.size() != b.items_.size()) return false;
    auto x = a.items_;
    auto y = b.items_;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
}

} // namespace devs
