#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "csn/props.hpp"
#include "csn/typecheck.hpp"
#include "support.hpp"

using namespace csn;

TEST_CASE("generated interfaces")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto iface = default_generated_interface(seed);
        std::size_t own = 0;
        for (const auto& [l, m] : iface.methods())
            own += BuiltinTable::standard().find(l) == nullptr;
        CHECK(own >= 3);
        CHECK(own <= 6);
        CHECK(validate_interface(iface, BuiltinTable::standard()).empty());
        CHECK(to_string(default_generated_interface(seed).type) == to_string(iface.type));
    }
}

TEST_CASE("generated networks are well typed and deterministic")
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        GenConfig cfg;
        cfg.seed = seed;
        cfg.max_sensors = 1 + static_cast<int>(seed % 4);
        auto iface = generation_interface(cfg);
        auto n = gen_well_typed_network(cfg);
        INFO("seed " << seed << "\n" << to_source(n, iface));
        CHECK(!n.sensors.empty());
        CHECK(n.sensors.size() <= static_cast<std::size_t>(cfg.max_sensors));
        CHECK(check_network(iface, n).empty());
        CHECK(canonical_form(gen_well_typed_network(cfg)) == canonical_form(n));
    }
}

TEST_CASE("a fixed interface is used as given")
{
    auto l = test::load_corpus("ping.csn");
    GenConfig cfg;
    cfg.interface = l.unit.interface;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        cfg.seed = seed;
        auto n = gen_well_typed_network(cfg);
        CHECK(check_network(l.unit.interface, n).empty());
    }
}

TEST_CASE("the sound engine preserves typing on generated networks")
{
    GenConfig cfg;
    cfg.seed = 1000;
    SuiteOptions opts;
    opts.instances = 40;
    opts.depth = 3;
    opts.jobs = 2;
    auto report = subject_reduction_suite(cfg, opts);
    CHECK(report.failures.empty());
    CHECK(report.passed + report.skipped == 40);
    CHECK(report.states > 40);
}

TEST_CASE("the suite finds the left-biased install mutation")
{
    GenConfig cfg;
    cfg.seed = 0;
    SuiteOptions opts;
    opts.instances = 100;
    opts.depth = 4;
    opts.jobs = 4;
    opts.engine.mutation = Mutation::LeftBiasedInstall;
    auto report = subject_reduction_suite(cfg, opts);
    REQUIRE(!report.failures.empty());

    ExploreOptions eo;
    eo.depth = opts.depth;
    eo.engine = opts.engine;
    for (const auto& f : report.failures) {
        INFO("seed " << f.seed);
        // The shrunk network still type-checks and still fails.
        CHECK(check_network(f.interface, f.network).empty());
        CHECK(!f.counterexample.path.empty());
        CHECK(std::holds_alternative<Counterexample>(explore(f.network, well_typed_property(f.interface), eo)));

        // Its source text reproduces the failure.
        auto text = to_source(f.network, f.interface);
        auto l = test::load_text(text);
        CHECK(check_network(l.unit.interface, l.network).empty());
        CHECK(std::holds_alternative<Counterexample>(explore(l.network, well_typed_property(l.unit.interface), eo)));

        // And the sound engine does not fail on it.
        CHECK(!std::holds_alternative<Counterexample>(
            explore(l.network, well_typed_property(l.unit.interface), ExploreOptions{eo.depth, eo.max_states, 1, {}})));
    }
}

TEST_CASE("suite results do not depend on the number of workers")
{
    GenConfig cfg;
    cfg.seed = 77;
    SuiteOptions one;
    one.instances = 30;
    one.depth = 3;
    one.engine.mutation = Mutation::LeftBiasedInstall;
    SuiteOptions four = one;
    four.jobs = 4;
    auto a = subject_reduction_suite(cfg, one);
    auto b = subject_reduction_suite(cfg, four);
    CHECK(a.passed == b.passed);
    CHECK(a.states == b.states);
    REQUIRE(a.failures.size() == b.failures.size());
    for (std::size_t i = 0; i < a.failures.size(); ++i) {
        CHECK(a.failures[i].seed == b.failures[i].seed);
        CHECK(canonical_form(a.failures[i].network) == canonical_form(b.failures[i].network));
    }
}

TEST_CASE("shrinking keeps a failing network failing")
{
    auto l = test::load_text(R"(
interface { ping: () -> {}, forward: (B) -> {}, field: () -> B, log_mac: (B) -> {}, log_field: (B) -> {} }
world { e_in = 1; e_out = 5; field = const(0); }
sensor a at (0,0) radius 1 energy 10 object { ping = () {} }
  run let r = install { f = () 1 } { f = () {} } in let y = r.f() in install y {}, loc.ping()
sensor b at (0,0.5) radius 1 energy 10 object { forward = (x) log_mac(x) } run net.forward(1)
)");
    ExploreOptions eo;
    eo.engine.mutation = Mutation::LeftBiasedInstall;
    auto shrunk = shrink_counterexample(l.network, l.unit.interface, eo);
    REQUIRE(shrunk.sensors.size() == 1);
    CHECK(shrunk.sensors[0].id == "a");
    CHECK(shrunk.sensors[0].queue.size() == 1);
    CHECK(shrunk.sensors[0].object.methods.empty());
}
