#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "csn/printer.hpp"
#include "csn/scheduler.hpp"
#include "support.hpp"

#include <algorithm>
#include <sstream>

using namespace csn;

namespace {

const char* kHead = R"(
interface { ping: () -> {}, f: (B) -> B, field: () -> B, log_mac: (B) -> {}, log_field: (B) -> {} }
world { e_in = 1; e_out = 5; field = const(2); }
)";

Network network(const std::string& sensors, bool metering = false)
{
    return test::load_text(kHead + sensors, CSN_CORPUS_DIR, metering).network;
}

std::string jsonl(const Trace& t)
{
    std::ostringstream out;
    write_json_lines(out, t);
    return out.str();
}

std::vector<std::string> logged(const Network& n, const std::string& id)
{
    std::vector<std::string> out;
    for (const auto& e : n.logs.entries(id))
        out.push_back(pretty_print(e.value));
    return out;
}

} // namespace

TEST_CASE("round robin with bursts reproduces the hand-derived trace")
{
    auto l = test::load_text(test::read_file(std::string(CSN_GOLDEN_DIR) + "/ping-pair.csn"));
    RoundRobinPolicy policy(true);
    auto r = run(l.network, policy, StepBudget{});
    CHECK(r.trace.outcome == Outcome::Quiescent);
    CHECK(r.trace.steps == 14);
    CHECK(jsonl(r.trace) == test::read_file(std::string(CSN_GOLDEN_DIR) + "/ping-pair.jsonl"));
    CHECK(logged(r.network, "sink") == std::vector<std::string>{"\"m1\""});
}

TEST_CASE("an empty network is quiescent at once")
{
    RoundRobinPolicy policy(false);
    auto r = run(Network{}, policy, StepBudget{});
    CHECK(r.trace.outcome == Outcome::Quiescent);
    CHECK(r.trace.steps == 0);
    CHECK(r.trace.events.empty());
}

TEST_CASE("budget exhaustion")
{
    auto l = test::load_corpus("ping.csn");
    RoundRobinPolicy policy(true);
    auto r = run(l.network, policy, StepBudget{10});
    CHECK(r.trace.outcome == Outcome::BudgetExhausted);
    CHECK(r.trace.steps == 10);
    CHECK(r.network.step_count == 10);
}

TEST_CASE("runtime faults stop the run")
{
    auto n = network("sensor a at (0,0) radius 1 energy 10 object { f = (x) x } run 1; loc.f(1, 2)");
    RoundRobinPolicy policy(false);
    auto r = run(n, policy, StepBudget{});
    CHECK(r.trace.outcome == Outcome::RuntimeError);
    // The let is taken; the faulting call is not.
    CHECK(r.trace.steps == 1);
    CHECK(r.network.step_count == 1);
    CHECK(r.trace.error.find("a:") == 0);
}

TEST_CASE("a long-running head is switched out after the quantum")
{
    auto n = network("sensor a at (0,0) radius 1 energy 100 object {} run "
                     "let a = 1 in let b = 1 in let c = 1 in let d = 1 in let e = 1 in "
                     "let f = 1 in let g = 1 in let h = 1 in let i = 1 in let j = 1 in {}, log_mac(7)");
    RoundRobinPolicy policy(false, 8);
    auto r = run(n, policy, StepBudget{});
    const auto& entries = r.network.logs.entries("a");
    REQUIRE(entries.size() == 1);
    // Eight lets, the switch at step 9, then the logging call.
    CHECK(entries[0].step == 10);
    CHECK(std::get<StepEvent>(r.trace.events[8]).rule == Rule::Switch);
    CHECK(r.trace.outcome == Outcome::Quiescent);
}

TEST_CASE("without bursts a deliver hands the turn on")
{
    auto l = test::load_corpus("ping.csn");
    RoundRobinPolicy policy(false);
    auto r = run(l.network, policy, StepBudget{3});
    REQUIRE(r.trace.events.size() == 3);
    CHECK(std::get<StepEvent>(r.trace.events[0]).rule == Rule::BroadcastDeliver);
    CHECK(std::get<StepEvent>(r.trace.events[1]).sensor == "s1");
}

TEST_CASE("ping flood delivers every MAC address to the sink")
{
    for (bool burst : {true, false}) {
        auto l = test::load_corpus("ping.csn");
        RoundRobinPolicy policy(burst);
        auto r = run(l.network, policy, StepBudget{10000});
        auto macs = logged(r.network, "sink");
        std::sort(macs.begin(), macs.end());
        macs.erase(std::unique(macs.begin(), macs.end()), macs.end());
        CHECK(macs == std::vector<std::string>{"\"m1\"", "\"m2\"", "\"m3\"", "\"m4\""});
    }
}

TEST_CASE("random runs are reproducible and ignore declaration order")
{
    auto l = test::load_corpus("ping-micro.csn");
    Network reversed = l.network;
    std::reverse(reversed.sensors.begin(), reversed.sensors.end());
    int differing = 0;
    std::string first;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomPolicy p1(seed), p2(seed), p3(seed);
        auto a = run(l.network, p1, StepBudget{2000});
        auto b = run(l.network, p2, StepBudget{2000});
        auto c = run(reversed, p3, StepBudget{2000});
        CHECK(jsonl(a.trace) == jsonl(b.trace));
        CHECK(jsonl(a.trace) == jsonl(c.trace));
        CHECK(a.network.logs.all().size() == c.network.logs.all().size());
        if (seed == 0)
            first = jsonl(a.trace);
        else
            differing += jsonl(a.trace) != first;
    }
    CHECK(differing > 10);
}

TEST_CASE("scripted runs")
{
    auto l = test::load_corpus("ping-micro.csn");
    std::vector<StepChoice> script{BroadcastDeliver{"sink", "m2"}, BroadcastRelease{"sink"}};
    ScriptedPolicy policy(script, std::make_unique<RoundRobinPolicy>(true));
    auto r = run(l.network, policy, StepBudget{3});
    REQUIRE(r.trace.events.size() == 3);
    auto first = std::get<StepEvent>(r.trace.events[0]);
    CHECK(first.detail[0] == std::pair<std::string, std::string>{"receiver", "m2"});
    CHECK(std::get<StepEvent>(r.trace.events[1]).rule == Rule::Release);

    ScriptedPolicy bad({BroadcastDeliver{"sink", "m3"}}, std::make_unique<RoundRobinPolicy>(true));
    CHECK_THROWS_AS(run(l.network, bad, StepBudget{3}), InvalidChoice);
}

TEST_CASE("energy is constant unless metering is on")
{
    auto plain = test::load_corpus("ping.csn");
    RoundRobinPolicy p1(true);
    auto r = run(plain.network, p1, StepBudget{500});
    for (const auto& s : r.network.sensors)
        CHECK(s.energy == plain.network.find(s.id)->energy);

    auto metered = test::load_corpus("ping.csn", true);
    RoundRobinPolicy p2(true);
    auto m = run(metered.network, p2, StepBudget{100000});
    CHECK(m.trace.outcome == Outcome::Quiescent);
    for (const auto& s : m.network.sensors) {
        CHECK(s.energy >= 0);
        CHECK(s.energy < 100);
    }
}

TEST_CASE("trace JSON")
{
    CHECK(value_json(number(2.5)) == "2.5");
    CHECK(value_json(symbol("m\"1")) == "\"m\\\"1\"");
    CHECK(value_json(unit()) == "null");
    CHECK(value_json(empty_object()) == "{\"term\":\"{}\"}");
    CHECK(to_json_line(LogEvent{4, "s", "log_mac", symbol("m1")}) ==
          R"({"step":4,"sensor":"s","builtin":"log_mac","value":"m1"})");
    StepEvent e{2, Rule::Release, "a", {{"label", "ping"}, {"delivered", "0"}}};
    CHECK(to_json_line(e) == R"({"step":2,"rule":"release","sensor":"a","detail":{"label":"ping","delivered":"0"}})");
    CHECK(to_string(Outcome::BudgetExhausted) == "budget-exhausted");
}
