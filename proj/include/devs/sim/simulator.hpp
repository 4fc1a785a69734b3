#pragma once

#include "devs/core/behavior.hpp"
#include "devs/core/message_bag.hpp"
#include "devs/core/time.hpp"

#include <array>
#include <cstdint>
#include <memory>

namespace devs::sim {

/// Which transition a deltfcn call dispatched to.
enum class Branch { none, confluent, internal, external };

std::string_view to_string(Branch b) noexcept;

/// Per-component simulator: wraps one behavior with its last and next event
/// times and the input bag injected since the last transition.
///
/// Invariants: tL <= tN; after any transition tN == tL + ta(s) and the
/// pending input is empty.
class Simulator {
public:
    explicit Simulator(std::unique_ptr<AtomicBehavior> model);

    Simulator(const Simulator& other);
    Simulator& operator=(const Simulator& other);
    Simulator(Simulator&&) noexcept = default;
    Simulator& operator=(Simulator&&) noexcept = default;

    void initialize(Time t);

    /// Output is λ(s) when t is the next event time, Φ otherwise.
    void lambda(Time t);

    /// Appends (to_port, value) to the pending input. Throws port_unknown.
    void receive_input(std::string_view from_port, Payload value, std::string to_port);

    /// The abstract transition dispatch:
    ///   input empty,     t != tN -> nothing
    ///   input non-empty, t == tN -> confluent
    ///   input empty,     t == tN -> internal
    ///   input non-empty, t <  tN -> external with e = t - tL
    /// Throws protocol_violation when t lies outside [tL, tN].
    Branch deltfcn(Time t);

    Time last_time() const noexcept { return tl_; }
    Time next_time() const noexcept { return tn_; }
    const MessageBag& input() const noexcept { return input_; }
    const MessageBag& output() const noexcept { return output_; }
    const AtomicBehavior& model() const noexcept { return *model_; }

    std::uint64_t branch_count(Branch b) const noexcept { return counts_[static_cast<std::size_t>(b)]; }

private:
    std::unique_ptr<AtomicBehavior> model_;
    Time tl_;
    Time tn_ = Time::infinity();
    MessageBag input_;
    MessageBag output_;
    std::array<std::uint64_t, 4> counts_{};
};

} // namespace devs::sim
