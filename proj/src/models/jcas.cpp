#include "devs/models/jcas.hpp"

#include "params.hpp"

namespace devs::models::jcas {

using detail::positive_duration;

namespace {

Payload text(std::string s) { return Payload::text(std::move(s)); }

bool carries(const MessageBag& bag, std::string_view port, std::string_view value) {
    for (const auto& item : bag) {
        if (item.port == port && item.value.is_text() && item.value.as_text() == value) return true;
    }
    return false;
}

} // namespace

// JTAC: requests immediate CAS, waits for an aircraft assignment, directs the
// attack and calls it off once the aircraft reports it has fired.
Jtac::Jtac(const Record& params)
    : PhasedBehavior({"YouCanUseUSMCAircraftIn", "requestForTACIn", "fireCommandIn"},
                     {"ImmediateCASOut", "TACCommandOut"}),
      delay_(positive_duration(params, "delay", 1.0)) {
    hold_in("requestCAS", delay_);
}

void Jtac::on_internal() {
    if (phase_is("requestCAS")) {
        passivate_in("waitForAssignment");
    } else if (phase_is("briefAircraft")) {
        passivate_in("continueExecution");
    } else {
        passivate();
    }
}

void Jtac::on_external(Time elapsed, const MessageBag& bag) {
    resume(elapsed);
    if (phase_is("waitForAssignment") && bag.has_port("YouCanUseUSMCAircraftIn")) {
        passivate_in("waitForAircraft");
    }
    if ((phase_is("waitForAircraft") || phase_is("waitForAssignment")) && bag.has_port("requestForTACIn")) {
        hold_in("briefAircraft", delay_);
    }
    if (phase_is("continueExecution") && bag.has_port("fireCommandIn")) {
        hold_in("assessDamage", delay_);
    }
}

MessageBag Jtac::on_output() const {
    if (phase_is("requestCAS")) return {{"ImmediateCASOut", text("CASResourcesSpec")}};
    if (phase_is("briefAircraft")) return {{"TACCommandOut", text("initialAttack")}};
    if (phase_is("assessDamage")) return {{"TACCommandOut", text("ceaseAttack")}};
    return {};
}

Payload Jtac::snapshot() const { return Payload::record(base_snapshot()); }

// AWACS: relays the CAS request to the CAOC and briefs aircraft on request;
// otherwise keeps surveilling.
Awacs::Awacs(const Record& params)
    : PhasedBehavior({"ImmediateCASIn", "sitBriefRequestIn"}, {"requestImmediateCASOut", "sitBriefOut"}),
      relay_delay_(positive_duration(params, "relayDelay", 1.0)),
      brief_delay_(positive_duration(params, "briefDelay", 2.0)) {
    passivate_in("doSurveillance");
}

void Awacs::on_internal() { passivate_in("doSurveillance"); }

void Awacs::on_external(Time elapsed, const MessageBag& bag) {
    resume(elapsed);
    if (!phase_is("doSurveillance")) return;
    if (bag.has_port("ImmediateCASIn")) {
        hold_in("relayRequest", relay_delay_);
    } else if (bag.has_port("sitBriefRequestIn")) {
        hold_in("prepareBrief", brief_delay_);
    }
}

MessageBag Awacs::on_output() const {
    if (phase_is("relayRequest")) return {{"requestImmediateCASOut", text("CASResourcesSpec")}};
    if (phase_is("prepareBrief")) return {{"sitBriefOut", text("sitBrief")}};
    return {};
}

Payload Awacs::snapshot() const { return Payload::record(base_snapshot()); }

Caoc::Caoc(const Record& params)
    : PhasedBehavior({"requestImmediateCASIn"}, {"readyOrderOut", "YouCanUseUSMCAircraftOut"}),
      delay_(positive_duration(params, "delay", 1.0)) {
    passivate();
}

void Caoc::on_internal() { passivate(); }

void Caoc::on_external(Time elapsed, const MessageBag& bag) {
    resume(elapsed);
    if (phase_is("passive") && bag.has_port("requestImmediateCASIn")) hold_in("assignAircraft", delay_);
}

MessageBag Caoc::on_output() const {
    if (!phase_is("assignAircraft")) return {};
    return {{"readyOrderOut", text("getReady")}, {"YouCanUseUSMCAircraftOut", text("CASResources")}};
}

Payload Caoc::snapshot() const { return Payload::record(base_snapshot()); }

Uav::Uav(const Record& params)
    : PhasedBehavior({"deconflictRequestIn"}, {"targetLocationOut"}), delay_(positive_duration(params, "delay", 1.0)) {
    passivate();
}

void Uav::on_internal() { passivate(); }

void Uav::on_external(Time elapsed, const MessageBag& bag) {
    resume(elapsed);
    if (phase_is("passive") && bag.has_port("deconflictRequestIn")) hold_in("locateTarget", delay_);
}

MessageBag Uav::on_output() const {
    if (!phase_is("locateTarget")) return {};
    return {{"targetLocationOut", text("(Lat,Long)")}};
}

Payload Uav::snapshot() const { return Payload::record(base_snapshot()); }

// USMC aircraft section: checks in with the JTAC after the ready order, asks
// for a brief and deconfliction once cleared, and fires when both the brief
// and the target location are in.
UsmcAircraft::UsmcAircraft(const Record& params)
    : PhasedBehavior({"readyOrderIn", "TACCommandIn", "sitBriefIn", "targetLocationIn"},
                     {"requestForTACOut", "sitBriefRequestOut", "deconflictRequestOut", "fireCommand"}),
      delay_(positive_duration(params, "delay", 1.0)) {
    passivate_in("standby");
}

void UsmcAircraft::on_internal() {
    if (phase_is("getReady")) {
        passivate_in("waitForTAC");
    } else if (phase_is("prepareAttack")) {
        passivate_in("attack");
    } else if (phase_is("attack")) {
        fired_ = true;
        passivate_in("attack");
    }
}

void UsmcAircraft::on_external(Time elapsed, const MessageBag& bag) {
    resume(elapsed);
    if (phase_is("standby") && bag.has_port("readyOrderIn")) {
        hold_in("getReady", delay_);
        return;
    }
    if (phase_is("waitForTAC") && carries(bag, "TACCommandIn", "initialAttack")) {
        hold_in("prepareAttack", delay_);
        return;
    }
    if (carries(bag, "TACCommandIn", "ceaseAttack")) ceased_ = true;
    if (!phase_is("attack")) return;
    has_brief_ = has_brief_ || bag.has_port("sitBriefIn");
    has_target_ = has_target_ || bag.has_port("targetLocationIn");
    if (has_brief_ && has_target_ && !fired_ && !ceased_ && sigma().is_infinite()) {
        hold_in("attack", delay_);
    }
}

MessageBag UsmcAircraft::on_output() const {
    if (phase_is("getReady")) return {{"requestForTACOut", text("requestTAC")}};
    if (phase_is("prepareAttack")) {
        return {{"sitBriefRequestOut", text("sitBriefRequest")}, {"deconflictRequestOut", text("requestDeconflict")}};
    }
    if (phase_is("attack") && sigma().is_finite()) return {{"fireCommand", text("fire")}};
    return {};
}

Payload UsmcAircraft::snapshot() const {
    auto r = base_snapshot();
    r.emplace("hasBrief", Payload::boolean(has_brief_));
    r.emplace("hasTarget", Payload::boolean(has_target_));
    r.emplace("fired", Payload::boolean(fired_));
    r.emplace("ceased", Payload::boolean(ceased_));
    return Payload::record(std::move(r));
}

Observer::Observer(const Record&) : PhasedBehavior({"observe"}, {}) { passivate(); }

void Observer::on_internal() { passivate(); }

void Observer::on_external(Time elapsed, const MessageBag& bag) {
    resume(elapsed);
    seen_ += static_cast<std::int64_t>(bag.size());
}

MessageBag Observer::on_output() const { return {}; }

Payload Observer::snapshot() const {
    auto r = base_snapshot();
    r.emplace("seen", Payload::integer(seen_));
    return Payload::record(std::move(r));
}

MissionLog::MissionLog(const Record& params)
    : PhasedBehavior({"TACCommandIn"}, {}), close_delay_(positive_duration(params, "closeDelay", 1.0)) {
    passivate_in("standby");
}

void MissionLog::on_internal() { passivate_in("closed"); }

void MissionLog::on_external(Time elapsed, const MessageBag& bag) {
    resume(elapsed);
    commands_ += static_cast<std::int64_t>(bag.size());
    if (carries(bag, "TACCommandIn", "ceaseAttack") && !phase_is("closed")) {
        hold_in("closing", close_delay_);
    } else if (carries(bag, "TACCommandIn", "initialAttack") && phase_is("standby")) {
        passivate_in("engaged");
    }
}

MessageBag MissionLog::on_output() const { return {}; }

Payload MissionLog::snapshot() const {
    auto r = base_snapshot();
    r.emplace("commands", Payload::integer(commands_));
    return Payload::record(std::move(r));
}

} // namespace devs::models::jcas
