#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "csn/explore.hpp"
#include "support.hpp"

using namespace csn;

namespace {

const char* kHead = R"(
interface { ping: () -> {}, forward: (B) -> {}, field: () -> B, log_mac: (B) -> {}, log_field: (B) -> {} }
world { e_in = 1; e_out = 5; field = const(0); }
)";

test::Loaded load(const std::string& sensors)
{
    return test::load_text(kHead + sensors);
}

Property always_false_state()
{
    Property p;
    p.name = "false";
    p.state = [](const Network&) { return std::optional<std::string>("nope"); };
    return p;
}

Property always_false_step()
{
    Property p;
    p.name = "false-step";
    p.step = [](const Network&, const StepChoice&, const std::vector<TraceEvent>&, const Network&) {
        return std::optional<std::string>("nope");
    };
    return p;
}

Property trivially_true()
{
    Property p;
    p.name = "true";
    p.state = [](const Network&) { return std::optional<std::string>(); };
    return p;
}

} // namespace

TEST_CASE("a false predicate fails immediately")
{
    auto l = test::load_corpus("ping-micro.csn");
    auto r = explore(l.network, always_false_state(), {});
    REQUIRE(std::holds_alternative<Counterexample>(r));
    CHECK(std::get<Counterexample>(r).path.empty());
    CHECK(std::get<Counterexample>(r).reason == "nope");

    auto s = explore(l.network, always_false_step(), {});
    REQUIRE(std::holds_alternative<Counterexample>(s));
    CHECK(std::get<Counterexample>(s).path.size() == 1);
}

TEST_CASE("depth zero checks only the start state")
{
    auto l = test::load_corpus("ping-micro.csn");
    ExploreOptions o;
    o.depth = 0;
    auto r = explore(l.network, always_false_step(), o);
    REQUIRE(std::holds_alternative<AllHold>(r));
    CHECK(std::get<AllHold>(r).states == 1);
}

TEST_CASE("states are deduplicated")
{
    // Two independent busy-waiters: every interleaving reaches the same state.
    auto l = load(R"(
sensor a at (0,0) radius 1 energy 10 object {} run loc.ping()
sensor b at (5,5) radius 1 energy 10 object {} run loc.ping()
)");
    ExploreOptions o;
    o.depth = 6;
    auto r = explore(l.network, trivially_true(), o);
    REQUIRE(std::holds_alternative<AllHold>(r));
    CHECK(std::get<AllHold>(r).states == 1);

    // Three independent lets, each let -> value -> empty: within depth d the
    // states are the progress vectors in {0,1,2}^3 summing to at most d.
    auto m = load(R"(
sensor a at (0,0) radius 1 energy 10 object {} run let x = 1 in x
sensor b at (5,5) radius 1 energy 10 object {} run let x = 1 in x
sensor c at (9,9) radius 1 energy 10 object {} run let x = 1 in x
)");
    o.depth = 1;
    CHECK(std::get<AllHold>(explore(m.network, trivially_true(), o)).states == 4);
    o.depth = 3;
    CHECK(std::get<AllHold>(explore(m.network, trivially_true(), o)).states == 17);
    o.depth = 6;
    CHECK(std::get<AllHold>(explore(m.network, trivially_true(), o)).states == 27);
}

TEST_CASE("the micro ping network satisfies every property")
{
    auto l = test::load_corpus("ping-micro.csn");
    ExploreOptions o;
    o.depth = 8;
    for (const char* name : {"well-typed", "membrane-once", "energy-gate"}) {
        INFO(name);
        auto r = explore(l.network, property_by_name(name, l.unit.interface), o);
        CHECK(std::holds_alternative<AllHold>(r));
    }
    CHECK_THROWS_AS(property_by_name("nope", l.unit.interface), Error);
}

TEST_CASE("property checks catch violations in hand-built steps")
{
    auto l = load(R"(
sensor a at (0,0) radius 1 energy 10 object {} run net.ping()
sensor b at (0.5,0) radius 1 energy 10 object {}
sensor far at (3,0) radius 1 energy 10 object {}
)");
    Network n = l.network;
    n.find("a")->membrane.emplace();
    n.find("a")->membrane->delivered.insert("b");
    auto once = membrane_once_property();
    CHECK(once.step(n, BroadcastDeliver{"a", "b"}, {}, n).has_value());
    CHECK(once.step(n, BroadcastDeliver{"a", "a"}, {}, n).has_value());
    CHECK(!once.step(n, BroadcastDeliver{"a", "far"}, {}, n).has_value());

    auto gate = energy_gate_property();
    CHECK(gate.step(n, BroadcastDeliver{"a", "far"}, {}, n).has_value());
    n.find("a")->energy = 2;
    CHECK(gate.step(n, BroadcastDeliver{"a", "b"}, {}, n).has_value());
    CHECK(!gate.step(n, LocalStep{"a", Rule::Let}, {}, n).has_value());
    n.find("a")->energy = 0.5;
    CHECK(gate.step(n, BroadcastRelease{"a"}, {}, n).has_value());

    auto typed = well_typed_property(l.unit.interface);
    CHECK(!typed.state(l.network).has_value());
    Network bad = l.network;
    bad.find("b")->queue.push_back(parse_program("net.nope()"));
    auto why = typed.state(bad);
    REQUIRE(why.has_value());
    CHECK(why->find("NoSuchMethod") == 0);
}

TEST_CASE("left-biased anonymous install breaks preservation")
{
    auto l = load(R"(
sensor a at (0,0) radius 1 energy 10 object {}
  run let r = install { f = () 1 } { f = () {} } in let y = r.f() in install y {}
)");
    ExploreOptions o;
    o.depth = 6;
    auto sound = explore(l.network, well_typed_property(l.unit.interface), o);
    CHECK(std::holds_alternative<AllHold>(sound));

    o.engine.mutation = Mutation::LeftBiasedInstall;
    auto broken = explore(l.network, well_typed_property(l.unit.interface), o);
    REQUIRE(std::holds_alternative<Counterexample>(broken));
    auto cex = std::get<Counterexample>(broken);
    // After the install r is { f = () 1 }, so y is B and `install y {}` fails.
    CHECK(cex.path.size() == 1);
    CHECK(cex.reason.find("TargetNotObject") == 0);
}

TEST_CASE("runtime faults end their branch")
{
    auto l = load("sensor a at (0,0) radius 1 energy 10 object { ping = () {} } run loc.ping(1)");
    Property calls;
    calls.name = "no-calls";
    calls.step = [](const Network&, const StepChoice& c, const std::vector<TraceEvent>&, const Network&) {
        auto local = std::get_if<LocalStep>(&c);
        return local && local->rule == Rule::MethodTop ? std::optional<std::string>("called")
                                                        : std::nullopt;
    };
    // The call faults, so it never reaches the property; switching is harmless.
    auto r = explore(l.network, calls, {});
    CHECK(std::holds_alternative<AllHold>(r));
}

TEST_CASE("state budget")
{
    auto l = test::load_corpus("ping.csn");
    ExploreOptions o;
    o.depth = 10;
    o.max_states = 20;
    auto r = explore(l.network, trivially_true(), o);
    REQUIRE(std::holds_alternative<StateBudgetExceeded>(r));
    CHECK(std::get<StateBudgetExceeded>(r).states == 21);
}

TEST_CASE("parallel exploration matches sequential exploration")
{
    auto l = test::load_corpus("ping-micro.csn");
    for (std::size_t depth : {3u, 6u, 9u}) {
        ExploreOptions one, four;
        one.depth = four.depth = depth;
        four.jobs = 4;
        auto a = explore(l.network, well_typed_property(l.unit.interface), one);
        auto b = explore(l.network, well_typed_property(l.unit.interface), four);
        REQUIRE(std::holds_alternative<AllHold>(a));
        REQUIRE(std::holds_alternative<AllHold>(b));
        CHECK(std::get<AllHold>(a).states == std::get<AllHold>(b).states);

        auto c = explore(l.network, always_false_step(), one);
        auto d = explore(l.network, always_false_step(), four);
        CHECK(std::get<Counterexample>(c).path == std::get<Counterexample>(d).path);
    }
}
