#include "devs/core/error.hpp"
#include "devs/proto/assignment.hpp"
#include "devs/proto/codec.hpp"
#include "devs/proto/envelope.hpp"
#include "devs/proto/key.hpp"
#include "devs/proto/log_record.hpp"
#include "devs/proto/manifest.hpp"
#include "../support/closure.hpp"
#include "../support/fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace devs;
using namespace devs::proto;

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

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    FAIL("expected an error");
    return {};
}

std::string random_text(std::mt19937& rng) {
    static const std::vector<std::string> alphabet = {"a", "b", "X", "0", "9", " ", "#", "@", ".", ":", "\"",
                                                      "\\", "/", "\n", "\t", "{", "]", "é", "→"};
    std::string s;
    const int n = std::uniform_int_distribution<int>(0, 10)(rng);
    for (int i = 0; i < n; ++i) s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    return s;
}

Payload random_payload(std::mt19937& rng, int depth = 0) {
    switch (std::uniform_int_distribution<int>(0, depth < 2 ? 4 : 3)(rng)) {
    case 0: return Payload::text(random_text(rng));
    case 1: return Payload::integer(std::uniform_int_distribution<std::int64_t>(INT64_MIN, INT64_MAX)(rng));
    case 2: return Payload::real(std::uniform_real_distribution<double>(-1e9, 1e9)(rng));
    case 3: return Payload::boolean(std::bernoulli_distribution(0.5)(rng));
    default: {
        Record r;
        const int n = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int i = 0; i < n; ++i) r.emplace(random_text(rng), random_payload(rng, depth + 1));
        return Payload::record(std::move(r));
    }
    }
}

Time random_time(std::mt19937& rng) {
    if (std::bernoulli_distribution(0.1)(rng)) return Time::infinity();
    return Time(std::uniform_real_distribution<double>(0.0, 1e6)(rng));
}

Envelope random_envelope(std::mt19937& rng) {
    Envelope e;
    e.service = "/sim/" + random_text(rng);
    if (std::bernoulli_distribution(0.7)(rng)) e.key = SimulatorKey{"Comp" + std::to_string(rng() % 100), "10.0.0." + std::to_string(rng() % 255)};
    if (std::bernoulli_distribution(0.7)(rng)) e.time = random_time(rng);
    MessageBag bag;
    const int n = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int i = 0; i < n; ++i) bag.add("p" + std::to_string(rng() % 4), random_payload(rng));
    e.body = json{{"bag", bag_to_json(bag)}, {"n", rng() % 1000}};
    if (std::bernoulli_distribution(0.5)(rng)) e.request_id = std::to_string(rng());
    return e;
}

} // namespace

TEST_SUITE("proto") {

TEST_CASE("simulator keys") {
    CHECK(render_key("Processor", "192.168.1.2") == "Processor@192.168.1.2");
    CHECK(parse_key("JTAC@10.0.0.1:8080") == SimulatorKey{"JTAC", "10.0.0.1:8080"});
    CHECK(code_of([] { render_key("a@b", "c"); }) == Errc::reserved_delimiter);
    CHECK(code_of([] { render_key("a", "c@d"); }) == Errc::reserved_delimiter);
    CHECK(code_of([] { render_key("", "c"); }) == Errc::invalid_argument);
    for (const char* bad : {"nokey", "a@b@c", "@b", "a@", ""}) {
        CAPTURE(bad);
        CHECK(code_of([&] { parse_key(bad); }) == Errc::parse_error);
    }
}

TEST_CASE("payload and time codec") {
    CHECK(payload_to_json(Payload::integer(3)) == json(3));
    CHECK(payload_from_json(json(3)).kind() == Payload::Kind::integer);
    CHECK(payload_from_json(json(3.0)).kind() == Payload::Kind::real);
    CHECK(payload_from_json(json::parse(R"({"a":{"b":true}})")).render() == "{a: {b: true}}");
    CHECK(code_of([] { payload_from_json(json::array()); }) == Errc::schema_error);
    CHECK(code_of([] { payload_from_json(json(nullptr)); }) == Errc::schema_error);
    CHECK(code_of([] { payload_from_json(json(18446744073709551615ull)); }) == Errc::schema_error);

    CHECK(time_to_json(Time::infinity()) == json("inf"));
    CHECK(time_from_json(json("inf")).is_infinite());
    CHECK(time_from_json(json(2.5)) == Time(2.5));
    CHECK(code_of([] { time_from_json(json(-1)); }) == Errc::schema_error);
    CHECK(code_of([] { time_from_json(json("soon")); }) == Errc::schema_error);
}

TEST_CASE("bag codec keeps order") {
    MessageBag bag{{"z", Payload::text("1")}, {"a", Payload::integer(2)}};
    const auto j = bag_to_json(bag);
    CHECK(canonical(j) == R"([{"port":"z","value":"1"},{"port":"a","value":2}])");
    CHECK(bag_from_json(j).items() == bag.items());
    CHECK(code_of([] { bag_from_json(json::parse(R"([{"port":"","value":1}])")); }) == Errc::schema_error);
}

TEST_CASE("component codec inlines nested models") {
    auto root = testing::load_top("jcas.devs.json");
    for (const auto& c : root->components) {
        const auto back = component_from_json(component_to_json(c));
        CHECK(back == c);
    }
    const auto& wrapper = *root->find("JCASNum1");
    CHECK(wrapper.is_coupled());
    const auto j = component_to_json(wrapper);
    CHECK(j.contains("coupled"));
    CHECK_FALSE(j.contains("kind"));
    CHECK(code_of([] { component_from_json(json::parse(R"({"name":"x","kind":"k","coupled":{}})")); }) ==
          Errc::schema_error);
    CHECK(coupled_from_json(coupled_to_json(*root)) == *root);
}

TEST_CASE("port references") {
    CHECK(port_ref_from_string("gen.out") == PortRef{"gen", "out"});
    CHECK(port_ref_to_string({"JTAC", "TACCommandOut"}) == "JTAC.TACCommandOut");
    for (const char* bad : {"gen", ".out", "gen.", "a.b.c"}) {
        CAPTURE(bad);
        CHECK(code_of([&] { port_ref_from_string(bad); }) == Errc::schema_error);
    }
}

TEST_CASE("envelope canonical form") {
    Envelope e;
    e.service = "/sim/getTN";
    e.key = SimulatorKey{"gen", "10.0.0.1"};
    e.time = Time::infinity();
    CHECK(encode_envelope(e) == R"({"body":{},"key":"gen@10.0.0.1","service":"/sim/getTN","time":"inf"})");
    Envelope bare;
    bare.service = "/main/compile";
    CHECK(encode_envelope(bare) == R"({"body":{},"service":"/main/compile"})");
}

TEST_CASE("envelope decode errors") {
    CHECK(message_of([] { decode_envelope(R"({"service":)"); }).find("malformed envelope at byte") == 0);
    CHECK(code_of([] { decode_envelope("[]"); }) == Errc::decode_error);
    CHECK(code_of([] { decode_envelope(R"({"body":{}})"); }) == Errc::decode_error);
    CHECK(message_of([] { decode_envelope(R"({"service":"s","extra":1})"); }).find("extra") != std::string::npos);
    CHECK(message_of([] { decode_envelope(R"({"service":"s","key":"nokey"})"); }).find("/key") != std::string::npos);
    CHECK(message_of([] { decode_envelope(R"({"service":"s","time":-2})"); }).find("/time") != std::string::npos);
    CHECK(code_of([] { decode_envelope(R"({"service":"s","body":[]})"); }) == Errc::decode_error);
}

TEST_CASE("error replies round trip the code") {
    Envelope req;
    req.service = "/sim/initialize";
    req.request_id = "7";
    const auto reply = make_error_reply(req, "not-found", "no simulator 'x@y'");
    CHECK(is_error(reply));
    CHECK(reply.request_id == "7");
    CHECK(code_of([&] { throw_if_error(decode_envelope(encode_envelope(reply))); }) == Errc::not_found);

    const auto ok = make_reply(req, json{{"error", "a plain string is not an error"}});
    CHECK_FALSE(is_error(ok));
    CHECK(make_reply(req, json(5)).body == json{{"result", 5}});
}

TEST_CASE("random envelopes round trip byte for byte") {
    std::mt19937 rng(1234);
    for (int i = 0; i < 1000; ++i) {
        const auto e = random_envelope(rng);
        const auto bytes = encode_envelope(e);
        const auto back = decode_envelope(bytes);
        CHECK(back == e);
        CHECK(encode_envelope(back) == bytes);
        const auto bag = bag_from_json(back.body["bag"]);
        CHECK(bag.items() == bag_from_json(e.body["bag"]).items());
    }
}

TEST_CASE("random payloads round trip") {
    std::mt19937 rng(99);
    for (int i = 0; i < 1000; ++i) {
        const auto p = random_payload(rng);
        CHECK(payload_from_json(json::parse(canonical(payload_to_json(p)))) == p);
    }
}

TEST_CASE("shipped manifests parse and resolve") {
    for (const char* file : {"jcas.devs.json", "ef-pipeline.devs.json"}) {
        CAPTURE(file);
        const auto text = testing::read_file(testing::manifest_path(file));
        const auto m = parse_manifest(text);
        const auto emitted = emit_manifest(m);
        CHECK(parse_manifest(emitted) == m);
        CHECK(emit_manifest(parse_manifest(emitted)) == emitted);
        const auto root = resolve_model(m, m.top_model);
        CHECK(validate_coupled(*root, *testing::full_registry()).empty());
    }
    const auto jcas = testing::load_top("jcas.devs.json");
    CHECK(jcas->component_names() ==
          std::vector<std::string>{"JCASNum1", "USMCAircraft", "CAOCobserver", "UAV", "CAOC", "JTAC", "AWACS"});
    CHECK(jcas->couplings.size() == 13);
}

TEST_CASE("manifest schema errors carry a locator") {
    auto fails_at = [](const std::string& text, const std::string& locator) {
        const auto msg = message_of([&] { parse_manifest(text); });
        CAPTURE(msg);
        CHECK(msg.rfind(locator, 0) == 0);
    };
    const std::string head = R"({"formatVersion":1,"packageName":"p","topModel":"T","models":[)";
    fails_at("{", "/");
    fails_at(R"({"formatVersion":2,"packageName":"p","topModel":"T","models":[]})", "/formatVersion");
    fails_at(R"({"formatVersion":1,"packageName":"","topModel":"T","models":[]})", "/packageName");
    fails_at(head + R"({"name":"X","components":[],"couplings":[]}]})", "/topModel");
    fails_at(head + R"({"name":"T","components":[{"name":"a"}],"couplings":[]}]})", "/models/0/components/0");
    fails_at(head + R"({"name":"T","components":[{"name":"a","kind":"k","model":"M"}],"couplings":[]}]})",
             "/models/0/components/0");
    fails_at(head + R"({"name":"T","components":[{"name":"a","model":"Nope"}],"couplings":[]}]})",
             "/models/0/components/0/model");
    fails_at(head + R"({"name":"T","components":[],"couplings":[{"from":"a","to":"b.c"}]}]})",
             "/models/0/couplings/0/from");
    fails_at(head + R"({"name":"T","components":[],"couplings":[]},{"name":"T","components":[],"couplings":[]}]})",
             "/models/1/name");
    fails_at(head + R"({"name":"T","components":[],"couplings":[],"bogus":1}]})", "/models/0");
}

TEST_CASE("model reference cycles are rejected") {
    const std::string text =
        R"({"formatVersion":1,"packageName":"p","topModel":"A","models":[
            {"name":"A","components":[{"name":"b","model":"B"}],"couplings":[]},
            {"name":"B","components":[{"name":"a","model":"A"}],"couplings":[]}]})";
    const auto m = parse_manifest(text);
    CHECK(code_of([&] { resolve_model(m, "A"); }) == Errc::schema_error);
    CHECK(code_of([&] { resolve_model(m, "Z"); }) == Errc::not_found);
}

TEST_CASE("random specs survive a manifest round trip") {
    std::mt19937 rng(77);
    for (int i = 0; i < 200; ++i) {
        const auto spec = testing::random_two_level(rng);
        const auto m = manifest_from_spec(*spec, "rand");
        const auto back = resolve_model(parse_manifest(emit_manifest(m)), spec->name);
        CHECK(*back == *spec);
    }
}

TEST_CASE("round robin assignment") {
    const auto a = round_robin_assign({"c", "a", "b", "d", "e"}, {"s1", "s2"});
    CHECK(a == AssignmentMap{{"a", "s1"}, {"b", "s2"}, {"c", "s1"}, {"d", "s2"}, {"e", "s1"}});
    CHECK(code_of([] { round_robin_assign({"a"}, {}); }) == Errc::no_servers);

    std::vector<std::string> comps;
    for (int i = 0; i < 10; ++i) comps.push_back("m" + std::to_string(i));
    const std::vector<std::string> servers{"n1", "n2", "n3", "n4", "n5"};
    std::map<std::string, int> load;
    for (const auto& [_, s] : round_robin_assign(comps, servers)) ++load[s];
    for (const auto& s : servers) CHECK(load[s] == 2);
}

TEST_CASE("assignment checks") {
    const std::vector<std::string> comps{"gen", "proc", "transducer"};
    const std::vector<std::string> servers{"a:1", "b:2"};
    CHECK_NOTHROW(check_assignment({{"gen", "a:1"}, {"proc", "b:2"}, {"transducer", "a:1"}}, comps, servers));
    CHECK(code_of([&] { check_assignment({{"gen", "c:3"}}, comps, servers); }) == Errc::assignment_invalid);
    CHECK(code_of([&] { check_assignment({{"ghost", "a:1"}}, comps, servers); }) == Errc::assignment_invalid);
    const auto msg = message_of([&] { check_assignment({{"gen", "a:1"}}, comps, servers); });
    CHECK(msg.find("proc") != std::string::npos);
    CHECK(msg.find("transducer") != std::string::npos);
    CHECK(code_of([&] { check_assignment({{"gen", "a:1"}}, comps, servers); }) == Errc::assignment_incomplete);
}

TEST_CASE("assignment and server list files") {
    const AssignmentMap a{{"JTAC", "10.0.0.1:8080"}, {"UAV", "10.0.0.2:8080"}};
    CHECK(parse_assignment(emit_assignment(a)) == a);
    CHECK(code_of([] { parse_assignment("{"); }) == Errc::parse_error);
    CHECK(code_of([] { parse_assignment("[]"); }) == Errc::parse_error);
    CHECK(code_of([] { parse_assignment(R"({"a":1})"); }) == Errc::parse_error);
    CHECK(parse_server_list("# main first\n10.0.0.2:8080\n\n  10.0.0.1:8080  # backup\r\n") ==
          std::vector<std::string>{"10.0.0.2:8080", "10.0.0.1:8080"});
}

TEST_CASE("console log records") {
    LogRecord r{"10.0.0.1:8080", "10.0.0.9", {"a", "b"}};
    CHECK(log_from_json(json::parse(canonical(log_to_json(r)))) == r);
}

}
