#pragma once

#include "devs/core/behavior.hpp"

#include <cstdint>

// Joint close air support scenario. The machines are minimal: each one
// reproduces its part of the reference console trace, with unit delays
// (AWACS briefs in two) so a full run takes eleven event times.
namespace devs::models::jcas {

class Jtac : public PhasedBehavior<Jtac> {
public:
    static constexpr std::string_view kind_id = "jcas.jtac";
    explicit Jtac(const Record& params);
    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    Time delay_;
};

class Awacs : public PhasedBehavior<Awacs> {
public:
    static constexpr std::string_view kind_id = "jcas.awacs";
    explicit Awacs(const Record& params);
    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    Time relay_delay_;
    Time brief_delay_;
};

class Caoc : public PhasedBehavior<Caoc> {
public:
    static constexpr std::string_view kind_id = "jcas.caoc";
    explicit Caoc(const Record& params);
    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    Time delay_;
};

class Uav : public PhasedBehavior<Uav> {
public:
    static constexpr std::string_view kind_id = "jcas.uav";
    explicit Uav(const Record& params);
    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    Time delay_;
};

class UsmcAircraft : public PhasedBehavior<UsmcAircraft> {
public:
    static constexpr std::string_view kind_id = "jcas.usmc";
    explicit UsmcAircraft(const Record& params);
    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    Time delay_;
    bool has_brief_ = false;
    bool has_target_ = false;
    bool fired_ = false;
    bool ceased_ = false;
};

/// Passive sink counting everything it receives on `observe`.
class Observer : public PhasedBehavior<Observer> {
public:
    static constexpr std::string_view kind_id = "jcas.observer";
    explicit Observer(const Record& params);
    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    std::int64_t seen_ = 0;
};

/// Scenario bookkeeping inside the JCASNum1 wrapper: follows the TAC
/// commands and closes the mission one time unit after the cease order.
class MissionLog : public PhasedBehavior<MissionLog> {
public:
    static constexpr std::string_view kind_id = "jcas.missionLog";
    explicit MissionLog(const Record& params);
    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    Time close_delay_;
    std::int64_t commands_ = 0;
};

} // namespace devs::models::jcas
