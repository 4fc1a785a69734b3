#pragma once

#include "devs/core/behavior.hpp"

#include <cstdint>
#include <map>
#include <optional>

namespace devs::models {

/// Emits "Job#k" on `out` every `period`. `stop` passivates, `start`
/// reactivates a passive generator.
class Generator : public PhasedBehavior<Generator> {
public:
    static constexpr std::string_view kind_id = "ef.generator";

    explicit Generator(const Record& params);

    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

    std::int64_t emitted() const noexcept { return emitted_; }

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    Time period_;
    std::int64_t emitted_ = 0;
};

/// Single-server processor. Serves one job for `procTime`; arrivals while
/// busy are dropped, and of a bag only the least job is kept.
class Processor : public PhasedBehavior<Processor> {
public:
    static constexpr std::string_view kind_id = "ef.processor";

    explicit Processor(const Record& params);

    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

    std::int64_t dropped() const noexcept { return dropped_; }
    std::int64_t served() const noexcept { return served_; }
    std::int64_t in_service() const noexcept { return job_ ? 1 : 0; }

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    Time proc_time_;
    std::optional<Payload> job_;
    std::int64_t dropped_ = 0;
    std::int64_t served_ = 0;
};

struct EFStats {
    std::int64_t jobs_sent = 0;
    std::int64_t jobs_received = 0;
    double throughput = 0.0;
    double turnaround = 0.0;

    Payload to_payload() const;
};

/// Counts generator arrivals (`ariv`) and solved jobs (`solved`). With an
/// `observeWindow` it publishes its statistics on `out` when the window
/// closes; without one it observes indefinitely.
class Transducer : public PhasedBehavior<Transducer> {
public:
    static constexpr std::string_view kind_id = "ef.transducer";

    explicit Transducer(const Record& params);

    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

    EFStats stats() const;

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    EFStats stats_at(Time clock) const;

    Time clock_;
    std::int64_t sent_ = 0;
    std::int64_t received_ = 0;
    std::int64_t matched_ = 0;
    double turnaround_sum_ = 0.0;
    std::map<std::string, double> arrivals_;
};

/// Checks every `period` that at least `minSolved` jobs have been solved so
/// far; on the first violation emits "stop" on `control` and stops checking.
class Acceptor : public PhasedBehavior<Acceptor> {
public:
    static constexpr std::string_view kind_id = "ef.acceptor";

    explicit Acceptor(const Record& params);

    std::string_view kind() const override { return kind_id; }
    Payload snapshot() const override;

protected:
    void on_internal() override;
    void on_external(Time elapsed, const MessageBag& bag) override;
    MessageBag on_output() const override;

private:
    bool violated() const { return solved_ < min_solved_; }

    Time period_;
    std::int64_t min_solved_;
    std::int64_t solved_ = 0;
    std::int64_t checks_ = 0;
};

} // namespace devs::models
