#include "devs/core/behavior.hpp"
#include "devs/core/coupled.hpp"
#include "devs/core/error.hpp"
#include "devs/core/message_bag.hpp"
#include "devs/core/payload.hpp"
#include "devs/core/registry.hpp"
#include "devs/core/time.hpp"
#include "devs/models/builtin.hpp"
#include "../support/test_behaviors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace devs;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::internal;
}

std::shared_ptr<BehaviorRegistry> test_registry() {
    auto r = std::make_shared<BehaviorRegistry>();
    models::register_builtin_behaviors(*r);
    testing::register_test_behaviors(*r);
    return r;
}

} // namespace

TEST_SUITE("core") {

TEST_CASE("time arithmetic and ordering") {
    CHECK(Time(2.5) + Time(0.5) == Time(3.0));
    CHECK((Time(1.0) + Time::infinity()).is_infinite());
    CHECK((Time::infinity() + Time::infinity()).is_infinite());
    CHECK(Time(3.0) - Time(1.0) == Time(2.0));
    CHECK((Time::infinity() - Time(4.0)).is_infinite());
    CHECK(Time(1.0) < Time::infinity());
    CHECK(Time::zero() < Time(0.25));
    CHECK(min(Time(2.0), Time::infinity()) == Time(2.0));
    CHECK(Time(-0.0).to_string() == "0");
    CHECK(Time(3.5).to_string() == "3.5");
    CHECK(Time::infinity().to_string() == "inf");
}

TEST_CASE("time rejects values outside the domain") {
    CHECK(code_of([] { Time(-1.0); }) == Errc::invalid_time);
    CHECK(code_of([] { Time(std::nan("")); }) == Errc::invalid_time);
    CHECK(code_of([] { (void)(Time(1.0) - Time(2.0)); }) == Errc::invalid_time);
    CHECK(code_of([] { (void)(Time::infinity() - Time::infinity()); }) == Errc::invalid_time);
}

TEST_CASE("payload kinds and rendering") {
    CHECK(Payload::text("Job#1").render() == "Job#1");
    CHECK(Payload::integer(-3).render() == "-3");
    CHECK(Payload::real(2.5).render() == "2.5");
    CHECK(Payload::boolean(true).render() == "true");
    CHECK(Payload::record({{"b", Payload::text("x")}, {"a", Payload::integer(1)}}).render() == "{a: 1, b: x}");
    CHECK(Payload::real(-0.0) == Payload::real(0.0));
    CHECK(code_of([] { Payload::real(std::numeric_limits<double>::infinity()); }) == Errc::invalid_argument);
    CHECK(code_of([] { (void)Payload::text("x").as_integer(); }) == Errc::invalid_argument);
    CHECK(Payload::integer(4).as_number() == 4.0);
}

TEST_CASE("parameter helpers") {
    const Record p{{"period", Payload::real(2.0)}, {"n", Payload::integer(3)}, {"name", Payload::text("x")}};
    CHECK(param_number(p, "period", 1.0) == 2.0);
    CHECK(param_number(p, "n", 1.0) == 3.0);
    CHECK(param_number(p, "missing", 7.0) == 7.0);
    CHECK(param_integer(p, "n", 0) == 3);
    CHECK(param_text(p, "name", "") == "x");
    CHECK(code_of([&] { param_number(p, "name", 0.0); }) == Errc::invalid_parameter);
}

TEST_CASE("message bag keeps insertion order and compares as a multiset") {
    MessageBag a{{"z", Payload::integer(1)}, {"a", Payload::integer(2)}, {"z", Payload::integer(3)}};
    MessageBag b{{"a", Payload::integer(2)}, {"z", Payload::integer(3)}, {"z", Payload::integer(1)}};
    CHECK(a == b);
    CHECK(a.render() == "<< port: z value: 1 port: a value: 2 port: z value: 3 >>");
    const auto g = a.grouped();
    REQUIRE(g.size() == 3);
    CHECK(g.items()[0].port == "a");
    CHECK(g.items()[1].value == Payload::integer(1));
    CHECK(g.items()[2].value == Payload::integer(3));
    CHECK(a.values_on("z").size() == 2);
    CHECK_FALSE(a == MessageBag{{"z", Payload::integer(1)}});
    CHECK(code_of([] { MessageBag().add("", Payload::text("x")); }) == Errc::invalid_argument);
}

TEST_CASE("atomic behavior guards its ports and elapsed time") {
    testing::Counter c({{"delay", Payload::real(2.0)}});
    CHECK(c.ta().is_infinite());
    CHECK(code_of([&] { c.delta_ext(Time(1.0), MessageBag{{"bogus", Payload::integer(1)}}); }) == Errc::port_unknown);
    CHECK(code_of([&] { c.delta_ext(Time(1.0), MessageBag{}); }) == Errc::protocol_violation);

    c.delta_ext(Time(1.0), MessageBag{{"in", Payload::integer(1)}, {"in", Payload::integer(1)}});
    CHECK(c.phase() == "reporting");
    CHECK(c.ta() == Time(2.0));
    CHECK(c.lambda() == MessageBag{{"out", Payload::integer(2)}});
    CHECK(code_of([&] { c.delta_ext(Time(3.0), MessageBag{{"in", Payload::integer(1)}}); }) == Errc::protocol_violation);

    testing::Rogue rogue({});
    CHECK(code_of([&] { (void)rogue.lambda(); }) == Errc::protocol_violation);
}

TEST_CASE("default confluent transition is internal then external at zero elapsed") {
    testing::Counter a({{"delay", Payload::real(1.0)}});
    a.delta_ext(Time(0.0), MessageBag{{"in", Payload::integer(0)}});
    auto b = a.clone();
    const MessageBag x{{"in", Payload::integer(0)}, {"reset", Payload::integer(0)}};

    a.delta_con(x);
    b->delta_int();
    b->delta_ext(Time::zero(), x);
    CHECK(a.same_state(*b));

    auto c = a.clone();
    auto d = a.clone();
    c->delta_con(MessageBag{});
    d->delta_int();
    CHECK(c->same_state(*d));
}

TEST_CASE("registry lookups") {
    auto r = test_registry();
    CHECK(r->contains("ef.generator"));
    CHECK(r->contains("jcas.jtac"));
    CHECK_FALSE(r->contains("x.y"));
    CHECK(code_of([&] { r->instantiate("x.y", {}); }) == Errc::unknown_behavior);
    CHECK(r->has_translation("identity"));
    CHECK(r->translation("test.double")(Payload::integer(4)) == Payload::integer(8));
    CHECK(code_of([&] { r->translation("nope"); }) == Errc::unknown_translation);

    // replacing a kind keeps the registry usable
    r->register_behavior("test.counter", [](const Record& p) { return std::make_unique<testing::Counter>(p); });
    CHECK(r->instantiate("test.counter", {})->kind() == "test.counter");
}

TEST_CASE("coupled model validation reports every violation with a locator") {
    auto r = test_registry();
    CoupledSpec spec;
    spec.name = "Top";
    spec.inputs = {"in"};
    spec.outputs = {"out"};
    spec.components = {
        {"gen", AtomicModelRef{"ef.generator", {}}},
        {"proc", AtomicModelRef{"ef.processor", {}}},
        {"proc", AtomicModelRef{"ef.processor", {}}},
        {"bad.name", AtomicModelRef{"ef.processor", {}}},
        {"ghost", AtomicModelRef{"x.y", {}}},
        {"neg", AtomicModelRef{"ef.generator", {{"period", Payload::real(-1.0)}}}},
    };
    spec.couplings = {
        {{"gen", "out"}, {"proc", "in"}},
        {{"gen", "nope"}, {"proc", "in"}},
        {{"missing", "out"}, {"proc", "in"}},
        {{"proc", "in"}, {"proc", "in"}},
        {{"Top", "in"}, {"proc", "in"}},
        {{"Top", "zzz"}, {"proc", "in"}},
        {{"proc", "out"}, {"Top", "out"}, "unregistered"},
    };
    const auto v = validate_coupled(spec, *r);
    auto has = [&](Violation::Kind k, const std::string& loc) {
        return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k && x.locator == loc; });
    };
    CHECK(has(Violation::Kind::duplicate_name, "Top/components[2]"));
    CHECK(has(Violation::Kind::invalid_name, "Top/components[3]"));
    CHECK(has(Violation::Kind::unknown_behavior, "Top/components[4]"));
    CHECK(has(Violation::Kind::invalid_parameters, "Top/components[5]"));
    CHECK(has(Violation::Kind::unknown_port, "Top/couplings[1]"));
    CHECK(has(Violation::Kind::unknown_component, "Top/couplings[2]"));
    CHECK(has(Violation::Kind::self_coupling, "Top/couplings[3]"));
    CHECK(has(Violation::Kind::unknown_port, "Top/couplings[5]"));
    CHECK(has(Violation::Kind::unknown_translation, "Top/couplings[6]"));
    CHECK_FALSE(has(Violation::Kind::unknown_port, "Top/couplings[0]"));
    CHECK_FALSE(has(Violation::Kind::unknown_port, "Top/couplings[4]"));
    CHECK(code_of([&] { require_valid(spec, *r); }) == Errc::validation_failed);
}

TEST_CASE("validation recurses into nested models") {
    auto r = test_registry();
    auto inner = std::make_shared<CoupledSpec>();
    inner->name = "Inner";
    inner->inputs = {"in"};
    inner->components = {{"c", AtomicModelRef{"test.counter", {}}}};
    inner->couplings = {{{"Inner", "in"}, {"c", "missing"}}};

    CoupledSpec outer;
    outer.name = "Outer";
    outer.components = {{"gen", AtomicModelRef{"ef.generator", {}}}, {"box", std::shared_ptr<const CoupledSpec>(inner)}};
    outer.couplings = {{{"gen", "out"}, {"box", "in"}}};

    const auto v = validate_coupled(outer, *r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::unknown_port);
    CHECK(v[0].locator == "Outer/Inner/couplings[0]");

    inner->couplings = {{{"Inner", "in"}, {"c", "in"}}};
    CHECK(validate_coupled(outer, *r).empty());
}

TEST_CASE("error codes have stable wire names") {
    CHECK(to_string(Errc::not_found) == "not-found");
    CHECK(to_string(Errc::assignment_incomplete) == "assignment-incomplete");
    for (int i = 0; i <= static_cast<int>(Errc::internal); ++i) {
        const auto e = static_cast<Errc>(i);
        CHECK(errc_from_string(to_string(e)) == e);
    }
}

}
