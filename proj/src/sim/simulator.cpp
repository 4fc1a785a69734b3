#include "devs/sim/simulator.hpp"

#include "devs/core/error.hpp"

namespace devs::sim {

std::string_view to_string(Branch b) noexcept {
    switch (b) {
    case Branch::none: return "none";
    case Branch::confluent: return "confluent";
    case Branch::internal: return "internal";
    case Branch::external: return "external";
    }
    return "none";
}

Simulator::Simulator(std::unique_ptr<AtomicBehavior> model) : model_(std::move(model)) {
    if (!model_) throw Error(Errc::invalid_argument, "simulator needs a model");
}

Simulator::Simulator(const Simulator& other)
    : model_(other.model_->clone()),
      tl_(other.tl_),
      tn_(other.tn_),
      input_(other.input_),
      output_(other.output_),
      counts_(other.counts_) {}

Simulator& Simulator::operator=(const Simulator& other) {
    if (this != &other) *this = Simulator(other);
    return *this;
}

void Simulator::initialize(Time t) {
    tl_ = t;
    tn_ = t + model_->ta();
    input_.clear();
    output_.clear();
}

void Simulator::lambda(Time t) {
    if (t == tn_ && tn_.is_finite()) {
        output_ = model_->lambda();
    } else {
        output_.clear();
    }
}

void Simulator::receive_input(std::string_view from_port, Payload value, std::string to_port) {
    (void)from_port;
    if (!model_->input_ports().contains(to_port)) {
        throw Error(Errc::port_unknown,
                    std::string(model_->kind()) + " has no input port '" + to_port + "'");
    }
    input_.add(std::move(to_port), std::move(value));
}

Branch Simulator::deltfcn(Time t) {
    if (t.is_infinite()) {
        throw Error(Errc::protocol_violation, "deltfcn at infinity");
    }
    if (t < tl_ || t > tn_) {
        throw Error(Errc::protocol_violation, "deltfcn at " + t.to_string() + " outside [" + tl_.to_string() +
                                                  ", " + tn_.to_string() + "]");
    }
    Branch branch = Branch::none;
    if (input_.empty() && t != tn_) {
        ++counts_[static_cast<std::size_t>(Branch::none)];
        return Branch::none;
    }
    if (!input_.empty() && t == tn_) {
        model_->delta_con(input_);
        branch = Branch::confluent;
    } else if (t == tn_) {
        model_->delta_int();
        branch = Branch::internal;
    } else {
        model_->delta_ext(t - tl_, input_);
        branch = Branch::external;
    }
    ++counts_[static_cast<std::size_t>(branch)];
    tl_ = t;
    tn_ = tl_ + model_->ta();
    input_.clear();
    return branch;
}

} // namespace devs::sim
