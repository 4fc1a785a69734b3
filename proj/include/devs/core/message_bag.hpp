#pragma once

#include "devs/core/payload.hpp"

#include <string>
#include <vector>

namespace devs {

struct PortValue {
    std::string port;
    Payload value;

    friend bool operator==(const PortValue&, const PortValue&) = default;
};

bool operator<(const PortValue& a, const PortValue& b);

/// Multiset of (port, value) pairs. Insertion order is kept for rendering,
/// equality ignores it. The empty bag plays the role of Φ.
class MessageBag {
public:
    MessageBag() = default;
    MessageBag(std::initializer_list<PortValue> items);

    void add(std::string port, Payload value);
    void add(PortValue item) { add(std::move(item.port), std::move(item.value)); }
    void append(const MessageBag& other);
    void clear() noexcept { items_.clear(); }

    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }
    const std::vector<PortValue>& items() const noexcept { return items_; }

    std::vector<Payload> values_on(std::string_view port) const;
    bool has_port(std::string_view port) const;

    /// Items grouped by port in lexicographic port order, arrival order kept
    /// within a port. This is the order in which transitions see a bag.
    MessageBag grouped() const;

    /// "<< port: p value: v port: q value: w >>"
    std::string render() const;

    friend bool operator==(const MessageBag& a, const MessageBag& b);

private:
    std::vector<PortValue> items_;
};

} // namespace devs
