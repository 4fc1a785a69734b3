#include "devs/core/behavior.hpp"

#include "devs/core/error.hpp"

namespace devs {

AtomicBehavior::AtomicBehavior(PortSet inputs, PortSet outputs)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {}

void AtomicBehavior::check_inputs(const MessageBag& bag) const {
    for (const auto& item : bag) {
        if (!inputs_.contains(item.port)) {
            throw Error(Errc::port_unknown,
                        std::string(kind()) + " has no input port '" + item.port + "'");
        }
    }
}

void AtomicBehavior::delta_int() { on_internal(); }

void AtomicBehavior::delta_ext(Time elapsed, const MessageBag& bag) {
    if (bag.empty()) {
        throw Error(Errc::protocol_violation, "external transition with an empty bag");
    }
    check_inputs(bag);
    if (elapsed > ta()) {
        throw Error(Errc::protocol_violation, "elapsed time " + elapsed.to_string() +
                                                  " exceeds time advance " + ta().to_string());
    }
    on_external(elapsed, bag.grouped());
}

void AtomicBehavior::delta_con(const MessageBag& bag) {
    check_inputs(bag);
    on_confluent(bag.grouped());
}

void AtomicBehavior::on_confluent(const MessageBag& bag) {
    on_internal();
    if (!bag.empty()) on_external(Time::zero(), bag);
}

MessageBag AtomicBehavior::lambda() const {
    MessageBag out = on_output();
    for (const auto& item : out) {
        if (!outputs_.contains(item.port)) {
            throw Error(Errc::protocol_violation,
                        std::string(kind()) + " emitted on undeclared port '" + item.port + "'");
        }
    }
    return out;
}

bool AtomicBehavior::same_state(const AtomicBehavior& other) const {
    return kind() == other.kind() && snapshot() == other.snapshot();
}

} // namespace devs
