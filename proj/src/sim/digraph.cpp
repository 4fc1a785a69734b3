#include "devs/sim/digraph.hpp"

#include "devs/core/error.hpp"
#include "devs/sim/simulator.hpp"

#include <algorithm>

namespace devs::sim {

namespace {

constexpr std::string_view coupled_kind = "devs.coupled";

// Nested simulation of a coupled model behind the atomic interface. The
// children keep absolute times on the wrapper's own clock (now_), which
// starts at zero; ta() is the distance from now_ to the earliest child event.
class CoupledBehavior final : public AtomicBehavior {
public:
    CoupledBehavior(const CoupledSpec& spec, const BehaviorRegistry& registry)
        : AtomicBehavior(PortSet(spec.inputs.begin(), spec.inputs.end()),
                         PortSet(spec.outputs.begin(), spec.outputs.end())),
          name_(spec.name) {
        for (const auto& comp : spec.components) {
            children_.push_back(Child{comp.name, Simulator(instantiate_component(comp, registry))});
        }
        std::sort(children_.begin(), children_.end(),
                  [](const Child& a, const Child& b) { return a.name < b.name; });
        for (const auto& c : spec.couplings) {
            links_.push_back(Link{index_of(spec, c.from), c.from.port, index_of(spec, c.to), c.to.port,
                                  registry.translation(c.translation)});
        }
        for (auto& child : children_) child.sim.initialize(Time::zero());
    }

    std::string_view kind() const override { return coupled_kind; }

    Time ta() const override { return next() - now_; }

    std::string phase() const override {
        std::string out = "{";
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (i) out += ", ";
            out += children_[i].name + ": " + children_[i].sim.model().phase();
        }
        return out + "}";
    }

    Payload snapshot() const override {
        Record children;
        for (const auto& child : children_) {
            children.emplace(child.name, Payload::record(Record{
                                             {"tL", Payload::text(child.sim.last_time().to_string())},
                                             {"tN", Payload::text(child.sim.next_time().to_string())},
                                             {"state", child.sim.model().snapshot()},
                                         }));
        }
        return Payload::record(Record{{"model", Payload::text(name_)},
                                      {"now", Payload::text(now_.to_string())},
                                      {"children", Payload::record(std::move(children))}});
    }

    std::unique_ptr<AtomicBehavior> clone() const override { return std::make_unique<CoupledBehavior>(*this); }

protected:
    void on_internal() override { step(next(), MessageBag{}); }
    void on_external(Time elapsed, const MessageBag& bag) override { step(now_ + elapsed, bag); }
    void on_confluent(const MessageBag& bag) override { step(next(), bag); }

    MessageBag on_output() const override {
        MessageBag out;
        const Time t = next();
        if (t.is_infinite()) return out;
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (children_[i].sim.next_time() != t) continue;
            const MessageBag produced = children_[i].sim.model().lambda();
            for (const auto& item : produced) {
                for (const auto& link : links_) {
                    if (link.from == static_cast<int>(i) && link.from_port == item.port && link.to == boundary) {
                        out.add(link.to_port, link.translate(item.value));
                    }
                }
            }
        }
        return out;
    }

private:
    static constexpr int boundary = -1;

    struct Child {
        std::string name;
        Simulator sim;
    };

    struct Link {
        int from;
        std::string from_port;
        int to;
        std::string to_port;
        Translation translate;
    };

    int index_of(const CoupledSpec& spec, const PortRef& ref) const {
        if (spec.is_boundary(ref)) return boundary;
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (children_[i].name == ref.component) return static_cast<int>(i);
        }
        throw Error(Errc::validation_failed, "coupling names unknown component '" + ref.component + "'");
    }

    Time next() const {
        Time t = Time::infinity();
        for (const auto& child : children_) t = min(t, child.sim.next_time());
        return t;
    }

    void deliver(const Link& link, const Payload& value) {
        if (link.to == boundary) return;
        children_[static_cast<std::size_t>(link.to)].sim.receive_input(link.from_port, link.translate(value), link.to_port);
    }

    void step(Time t, const MessageBag& external) {
        for (auto& child : children_) child.sim.lambda(t);
        for (std::size_t i = 0; i < children_.size(); ++i) {
            for (const auto& item : children_[i].sim.output()) {
                for (const auto& link : links_) {
                    if (link.from == static_cast<int>(i) && link.from_port == item.port) deliver(link, item.value);
                }
            }
        }
        for (const auto& item : external) {
            for (const auto& link : links_) {
                if (link.from == boundary && link.from_port == item.port) deliver(link, item.value);
            }
        }
        for (auto& child : children_) child.sim.deltfcn(t);
        now_ = t;
    }

    std::string name_;
    std::vector<Child> children_;
    std::vector<Link> links_;
    Time now_;
};

} // namespace

std::unique_ptr<AtomicBehavior> digraph_to_atomic(const CoupledSpec& spec, const BehaviorRegistry& registry) {
    require_valid(spec, registry);
    return std::make_unique<CoupledBehavior>(spec, registry);
}

std::unique_ptr<AtomicBehavior> instantiate_component(const ComponentSpec& component, const BehaviorRegistry& registry) {
    if (component.is_coupled()) return digraph_to_atomic(component.coupled(), registry);
    return registry.instantiate(component.atomic().kind, component.atomic().params);
}

} // namespace devs::sim
