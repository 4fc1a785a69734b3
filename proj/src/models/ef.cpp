#include "devs/models/ef.hpp"

#include "params.hpp"

#include <algorithm>

namespace devs::models {

using detail::positive_duration;

Generator::Generator(const Record& params)
    : PhasedBehavior({"start", "stop"}, {"out"}), period_(positive_duration(params, "period", 1.0)) {
    hold_in("active", period_);
}

void Generator::on_internal() {
    ++emitted_;
    hold_in("active", period_);
}

void Generator::on_external(Time elapsed, const MessageBag& bag) {
    resume(elapsed);
    // stop wins over start when both arrive together
    if (bag.has_port("stop")) {
        passivate();
    } else if (bag.has_port("start") && phase_is("passive")) {
        hold_in("active", period_);
    }
}

MessageBag Generator::on_output() const {
    if (!phase_is("active")) return {};
    return {{"out", Payload::text("Job#" + std::to_string(emitted_ + 1))}};
}

Payload Generator::snapshot() const {
    auto r = base_snapshot();
    r.emplace("emitted", Payload::integer(emitted_));
    return Payload::record(std::move(r));
}

Processor::Processor(const Record& params)
    : PhasedBehavior({"in"}, {"out"}), proc_time_(positive_duration(params, "procTime", 1.0)) {
    passivate();
}

void Processor::on_internal() {
    ++served_;
    job_.reset();
    passivate();
}

void Processor::on_external(Time elapsed, const MessageBag& bag) {
    if (phase_is("busy")) {
        resume(elapsed);
        dropped_ += static_cast<std::int64_t>(bag.size());
        return;
    }
    // the least job is served so the choice does not depend on arrival order
    job_ = std::min_element(bag.begin(), bag.end(), [](const auto& a, const auto& b) { return a.value < b.value; })->value;
    dropped_ += static_cast<std::int64_t>(bag.size()) - 1;
    hold_in("busy", proc_time_);
}

MessageBag Processor::on_output() const {
    if (!phase_is("busy") || !job_) return {};
    return {{"out", *job_}};
}

Payload Processor::snapshot() const {
    auto r = base_snapshot();
    r.emplace("job", job_ ? *job_ : Payload::text(""));
    r.emplace("dropped", Payload::integer(dropped_));
    r.emplace("served", Payload::integer(served_));
    return Payload::record(std::move(r));
}

Payload EFStats::to_payload() const {
    return Payload::record(Record{
        {"jobsSent", Payload::integer(jobs_sent)},
        {"jobsReceived", Payload::integer(jobs_received)},
        {"throughput", Payload::real(throughput)},
        {"turnaround", Payload::real(turnaround)},
    });
}

Transducer::Transducer(const Record& params) : PhasedBehavior({"ariv", "solved"}, {"out"}) {
    if (has_param(params, "observeWindow")) {
        hold_in("observing", positive_duration(params, "observeWindow", 1.0));
    } else {
        passivate_in("observing");
    }
}

void Transducer::on_internal() {
    if (sigma().is_finite()) clock_ += sigma();
    passivate_in("done");
}

void Transducer::on_external(Time elapsed, const MessageBag& bag) {
    clock_ += elapsed;
    resume(elapsed);
    if (!phase_is("observing")) return;
    for (const auto& item : bag) {
        const std::string id = item.value.render();
        if (item.port == "ariv") {
            ++sent_;
            arrivals_[id] = clock_.value();
        } else {
            ++received_;
            if (auto it = arrivals_.find(id); it != arrivals_.end()) {
                turnaround_sum_ += clock_.value() - it->second;
                ++matched_;
            }
        }
    }
}

MessageBag Transducer::on_output() const {
    if (!phase_is("observing") || sigma().is_infinite()) return {};
    // Published at window close, when the clock has advanced by sigma.
    return {{"out", stats_at(clock_ + sigma()).to_payload()}};
}

EFStats Transducer::stats() const { return stats_at(clock_); }

EFStats Transducer::stats_at(Time clock) const {
    EFStats s;
    s.jobs_sent = sent_;
    s.jobs_received = received_;
    const double elapsed = clock.value();
    s.throughput = elapsed > 0.0 ? static_cast<double>(received_) / elapsed : 0.0;
    s.turnaround = matched_ > 0 ? turnaround_sum_ / static_cast<double>(matched_) : 0.0;
    return s;
}

Payload Transducer::snapshot() const {
    auto r = base_snapshot();
    Record arrivals;
    for (const auto& [id, t] : arrivals_) arrivals.emplace(id, Payload::real(t));
    r.emplace("clock", Payload::real(clock_.value()));
    r.emplace("jobsSent", Payload::integer(sent_));
    r.emplace("jobsReceived", Payload::integer(received_));
    r.emplace("matched", Payload::integer(matched_));
    r.emplace("turnaroundSum", Payload::real(turnaround_sum_));
    r.emplace("arrivals", Payload::record(std::move(arrivals)));
    return Payload::record(std::move(r));
}

Acceptor::Acceptor(const Record& params)
    : PhasedBehavior({"solved"}, {"control"}),
      period_(positive_duration(params, "period", 1.0)),
      min_solved_(param_integer(params, "minSolved", 1)) {
    if (min_solved_ < 0) {
        throw Error(Errc::invalid_parameter, "parameter 'minSolved' must be non-negative");
    }
    hold_in("monitoring", period_);
}

void Acceptor::on_internal() {
    ++checks_;
    if (violated()) {
        passivate_in("stopped");
    } else {
        hold_in("monitoring", period_);
    }
}

void Acceptor::on_external(Time elapsed, const MessageBag& bag) {
    resume(elapsed);
    if (phase_is("monitoring")) solved_ += static_cast<std::int64_t>(bag.size());
}

MessageBag Acceptor::on_output() const {
    if (phase_is("monitoring") && violated()) return {{"control", Payload::text("stop")}};
    return {};
}

Payload Acceptor::snapshot() const {
    auto r = base_snapshot();
    r.emplace("solved", Payload::integer(solved_));
    r.emplace("checks", Payload::integer(checks_));
    return Payload::record(std::move(r));
}

} // namespace devs::models
