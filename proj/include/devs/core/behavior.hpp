#pragma once

#include "devs/core/message_bag.hpp"
#include "devs/core/payload.hpp"
#include "devs/core/time.hpp"

#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace devs {

using PortSet = std::set<std::string, std::less<>>;

/// Parallel DEVS atomic model: state plus the functions δint, δext, δcon, λ
/// and ta, behind a uniform interface.
///
/// The public transition entry points check the bag against the declared
/// input ports and regroup it (lexicographic port order, arrival order within
/// a port) before handing it to the derived class. A derived class that does
/// not override on_confluent() gets δcon(s, x) = δext(δint(s), 0, x), which
/// reduces to δint(s) for the empty bag.
class AtomicBehavior {
public:
    virtual ~AtomicBehavior() = default;

    virtual std::string_view kind() const = 0;
    virtual Time ta() const = 0;
    virtual std::string phase() const = 0;

    /// Full state as a record; two behaviors of the same kind are in the same
    /// state iff their snapshots compare equal.
    virtual Payload snapshot() const = 0;
    virtual std::unique_ptr<AtomicBehavior> clone() const = 0;

    const PortSet& input_ports() const noexcept { return inputs_; }
    const PortSet& output_ports() const noexcept { return outputs_; }

    void delta_int();
    void delta_ext(Time elapsed, const MessageBag& bag);
    void delta_con(const MessageBag& bag);

    /// Output function. Must not change the state; throws protocol_violation
    /// if the derived class emits on an undeclared port.
    MessageBag lambda() const;

    bool same_state(const AtomicBehavior& other) const;

    /// Throws port_unknown for the first item not on a declared input.
    void check_inputs(const MessageBag& bag) const;

protected:
    AtomicBehavior(PortSet inputs, PortSet outputs);
    AtomicBehavior(const AtomicBehavior&) = default;
    AtomicBehavior& operator=(const AtomicBehavior&) = default;

    virtual void on_internal() = 0;
    virtual void on_external(Time elapsed, const MessageBag& bag) = 0;
    virtual void on_confluent(const MessageBag& bag);
    virtual MessageBag on_output() const = 0;

private:
    PortSet inputs_;
    PortSet outputs_;
};

/// Common base for behaviors following the phase/sigma idiom: the state holds
/// a phase label and the time remaining until the next internal event.
template <typename Derived>
class PhasedBehavior : public AtomicBehavior {
public:
    Time ta() const override { return sigma_; }
    std::string phase() const override { return phase_; }

    std::unique_ptr<AtomicBehavior> clone() const override {
        return std::make_unique<Derived>(static_cast<const Derived&>(*this));
    }

protected:
    using AtomicBehavior::AtomicBehavior;

    void hold_in(std::string phase, Time sigma) {
        phase_ = std::move(phase);
        sigma_ = sigma;
    }
    void passivate_in(std::string phase) { hold_in(std::move(phase), Time::infinity()); }
    void passivate() { passivate_in("passive"); }
    /// Keep the current schedule after an external event that arrived e late.
    void resume(Time elapsed) { sigma_ = sigma_ - elapsed; }

    bool phase_is(std::string_view p) const { return phase_ == p; }
    Time sigma() const { return sigma_; }

    Record base_snapshot() const {
        return Record{{"phase", Payload::text(phase_)}, {"sigma", Payload::text(sigma_.to_string())}};
    }

private:
    std::string phase_ = "passive";
    Time sigma_ = Time::infinity();
};

} // namespace devs
