// csn: check, run, trace and explore sensor-network programs.

#include "csn/explore.hpp"
#include "csn/parser.hpp"
#include "csn/printer.hpp"
#include "csn/props.hpp"
#include "csn/scheduler.hpp"
#include "csn/trace.hpp"
#include "csn/typecheck.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace csn;

namespace {

constexpr int kOk = 0;
constexpr int kTypeErrors = 1;
constexpr int kParseError = 2;
constexpr int kIoError = 3;
constexpr int kRuntimeError = 4;
constexpr int kCounterexample = 5;
constexpr int kStateBudget = 6;

const char* kExitCodes = R"(Exit codes:
  0  ok / property holds
  1  type errors
  2  parse errors
  3  I/O errors
  4  runtime error during run
  5  counterexample found (explore, props)
  6  state budget exceeded (explore))";

struct Loaded {
    SourceUnit unit;
    Network network;
};

// Thrown with the exit code already decided and the message printed.
struct Exit {
    int code;
};

Loaded load(const std::string& path, bool meter)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << path << "\n";
        throw Exit{kIoError};
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Loaded l;
    try {
        l.unit = parse_network(buf.str());
    } catch (const ParseError& e) {
        std::cerr << path << ":" << e.what() << "\n";
        throw Exit{kParseError};
    }
    try {
        auto world = make_world(l.unit.world, fs::path(path).parent_path(), meter);
        l.network = make_network(l.unit, std::make_shared<const WorldConfig>(std::move(world)));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        throw Exit{kIoError};
    }
    return l;
}

std::vector<TypeError> type_errors(const Loaded& l)
{
    auto errors = validate_interface(l.unit.interface, *l.network.world->builtins);
    auto more = check_network(l.unit.interface, l.network);
    errors.insert(errors.end(), more.begin(), more.end());
    return errors;
}

void report_errors(const std::vector<TypeError>& errors, bool json)
{
    if (json) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& e : errors)
            arr.push_back({{"code", to_string(e.code())},
                           {"sensor", e.sensor()},
                           {"location", e.location()},
                           {"message", e.detail()}});
        std::cout << arr.dump(2) << "\n";
        return;
    }
    for (const auto& e : errors) {
        std::cout << (e.sensor().empty() ? "" : e.sensor() + ": ") << (e.location().empty() ? "" : e.location() + ": ")
                  << to_string(e.code()) << ": " << e.detail() << "\n";
    }
}

std::uint64_t default_seed()
{
    if (const char* s = std::getenv("CSN_SEED"))
        return std::strtoull(s, nullptr, 10);
    return 0;
}

struct RunFlags {
    std::string path;
    std::string schedule = "deliver-all";
    std::optional<std::uint64_t> seed;
    std::uint64_t max_steps = 10000;
    bool meter = false;
    std::string trace_out;
    bool untyped = false;
    bool json = false;
};

int cmd_check(const std::string& path, bool json)
{
    Loaded l = load(path, false);
    auto errors = type_errors(l);
    if (json || !errors.empty())
        report_errors(errors, json);
    if (!errors.empty())
        return kTypeErrors;
    if (!json)
        std::cout << path << ": ok (" << l.network.sensors.size() << " sensors)\n";
    return kOk;
}

int cmd_run(const RunFlags& f)
{
    Loaded l = load(f.path, f.meter);
    if (!f.untyped) {
        auto errors = type_errors(l);
        if (!errors.empty()) {
            report_errors(errors, f.json);
            return kTypeErrors;
        }
    }
    std::unique_ptr<SchedulerPolicy> policy;
    if (f.schedule == "round-robin")
        policy = std::make_unique<RoundRobinPolicy>(false);
    else if (f.schedule == "deliver-all")
        policy = std::make_unique<RoundRobinPolicy>(true);
    else
        policy = std::make_unique<RandomPolicy>(f.seed.value_or(default_seed()));

    RunResult r = run(l.network, *policy, StepBudget{f.max_steps});

    if (!f.trace_out.empty()) {
        std::ofstream out(f.trace_out, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << f.trace_out << "\n";
            return kIoError;
        }
        write_json_lines(out, r.trace);
    }

    std::cout << "outcome: " << to_string(r.trace.outcome) << " after " << r.trace.steps << " steps\n";
    for (const auto& s : r.network.sensors) {
        const auto& entries = r.network.logs.entries(s.id);
        if (entries.empty())
            continue;
        std::cout << s.id << ":\n";
        for (const auto& e : entries)
            std::cout << "  [" << e.step << "] " << e.builtin << " " << pretty_print(e.value) << "\n";
    }
    if (r.trace.outcome == Outcome::RuntimeError) {
        std::cerr << "runtime error: " << r.trace.error << "\n";
        return kRuntimeError;
    }
    return kOk;
}

int cmd_explore(const std::string& path, const std::string& prop, ExploreOptions opts, bool meter)
{
    Loaded l = load(path, meter);
    Property p = property_by_name(prop, l.unit.interface);
    auto result = explore(l.network, p, opts);
    if (auto a = std::get_if<AllHold>(&result)) {
        std::cout << prop << " holds: " << a->states << " states to depth " << opts.depth << "\n";
        return kOk;
    }
    if (auto s = std::get_if<StateBudgetExceeded>(&result)) {
        std::cout << "state budget exceeded after " << s->states << " states\n";
        return kStateBudget;
    }
    const auto& c = std::get<Counterexample>(result);
    std::cout << "counterexample after " << c.path.size() << " step(s): " << c.reason << "\n";
    for (std::size_t i = 0; i < c.path.size(); ++i)
        std::cout << "  " << i + 1 << ". " << to_string(c.path[i]) << "\n";
    return kCounterexample;
}

struct PropsFlags {
    GenConfig gen;
    SuiteOptions suite;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

int cmd_props(PropsFlags f)
{
    f.gen.seed = f.seed.value_or(default_seed());
    SuiteReport r = subject_reduction_suite(f.gen, f.suite);
    std::cout << "subject reduction, depth " << f.suite.depth << ", seeds " << f.gen.seed << ".."
              << f.gen.seed + static_cast<std::uint64_t>(std::max(0, f.suite.instances) - 1) << "\n";
    std::cout << "  instances        " << r.instances << "\n";
    std::cout << "  all hold         " << r.passed << "\n";
    std::cout << "  counterexamples  " << r.failures.size() << "\n";
    std::cout << "  skipped (budget) " << r.skipped << "\n";
    std::cout << "  states visited   " << r.states << "\n";
    for (const auto& fail : r.failures) {
        std::cout << "seed " << fail.seed << ": " << fail.counterexample.reason << "\n";
        for (const auto& c : fail.counterexample.path)
            std::cout << "    " << to_string(c) << "\n";
        if (!f.out_dir.empty()) {
            fs::create_directories(f.out_dir);
            fs::path file = fs::path(f.out_dir) / ("counterexample-" + std::to_string(fail.seed) + ".csn");
            std::ofstream out(file);
            out << "// counterexample path:\n";
            for (const auto& c : fail.counterexample.path)
                out << "//   " << to_string(c) << "\n";
            out << to_source(fail.network, fail.interface);
            std::cout << "    written to " << file.string() << "\n";
        }
    }
    return r.failures.empty() ? kOk : kCounterexample;
}

void add_run_options(CLI::App* cmd, RunFlags& f, bool trace_required)
{
    cmd->add_option("file", f.path, "network source (.csn)")->required();
    cmd->add_option("--schedule", f.schedule, "round-robin, deliver-all or random")
        ->check(CLI::IsMember({"round-robin", "deliver-all", "random"}));
    cmd->add_option("--seed", f.seed, "seed for the random schedule (default: $CSN_SEED or 0)");
    cmd->add_option("--max-steps", f.max_steps, "step budget");
    cmd->add_flag("--meter", f.meter, "subtract e_in per local step and e_out per broadcast");
    auto* t = cmd->add_option("--trace-out", f.trace_out, "write the trace as JSON lines");
    if (trace_required)
        t->required();
    cmd->add_flag("--untyped", f.untyped, "run without type checking");
    cmd->add_flag("--json", f.json, "report type errors as JSON");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Type checker, interpreter and state explorer for sensor-network programs"};
    app.footer(kExitCodes);
    app.require_subcommand(1);

    std::string check_path;
    bool check_json = false;
    auto* check = app.add_subcommand("check", "parse and type-check a network");
    check->add_option("file", check_path, "network source (.csn)")->required();
    check->add_flag("--json", check_json, "report errors as a JSON array");

    RunFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "run a network and print the logs");
    add_run_options(run_cmd, run_flags, false);

    RunFlags trace_flags;
    auto* trace_cmd = app.add_subcommand("trace", "run a network and write its trace");
    add_run_options(trace_cmd, trace_flags, true);

    std::string explore_path;
    std::string prop = "well-typed";
    ExploreOptions explore_opts;
    bool explore_meter = false;
    bool explore_mutate = false;
    auto* explore_cmd = app.add_subcommand("explore", "check a property on every interleaving up to a depth");
    explore_cmd->add_option("file", explore_path, "network source (.csn)")->required();
    explore_cmd->add_option("--depth", explore_opts.depth, "number of steps")->required();
    explore_cmd->add_option("--prop", prop, "well-typed, membrane-once or energy-gate")
        ->check(CLI::IsMember({"well-typed", "membrane-once", "energy-gate"}));
    explore_cmd->add_option("--max-states", explore_opts.max_states, "distinct state cap");
    explore_cmd->add_option("--jobs", explore_opts.jobs, "worker threads");
    explore_cmd->add_flag("--meter", explore_meter, "metered energy");
    explore_cmd->add_flag("--mutate-install", explore_mutate, "test fixture: left-biased install");

    PropsFlags props_flags;
    bool props_mutate = false;
    bool no_shrink = false;
    auto* props_cmd = app.add_subcommand("props", "subject-reduction suite over generated networks");
    props_cmd->add_option("--instances", props_flags.suite.instances, "number of generated networks");
    props_cmd->add_option("--depth", props_flags.suite.depth, "exploration depth");
    props_cmd->add_option("--seed", props_flags.seed, "first seed (default: $CSN_SEED or 0)");
    props_cmd->add_option("--max-sensors", props_flags.gen.max_sensors)->check(CLI::PositiveNumber);
    props_cmd->add_option("--max-methods", props_flags.gen.max_methods)->check(CLI::PositiveNumber);
    props_cmd->add_option("--max-program-depth", props_flags.gen.max_program_depth)->check(CLI::PositiveNumber);
    props_cmd->add_option("--max-states", props_flags.suite.max_states, "state cap per instance");
    props_cmd->add_option("--jobs", props_flags.suite.jobs, "worker threads");
    props_cmd->add_option("--out", props_flags.out_dir, "directory for counterexample .csn files");
    props_cmd->add_flag("--mutate-install", props_mutate, "test fixture: left-biased install");
    props_cmd->add_flag("--no-shrink", no_shrink, "report counterexamples unshrunk");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check)
            return cmd_check(check_path, check_json);
        if (*run_cmd)
            return cmd_run(run_flags);
        if (*trace_cmd)
            return cmd_run(trace_flags);
        if (*explore_cmd) {
            if (explore_mutate)
                explore_opts.engine.mutation = Mutation::LeftBiasedInstall;
            return cmd_explore(explore_path, prop, explore_opts, explore_meter);
        }
        if (*props_cmd) {
            if (props_mutate)
                props_flags.suite.engine.mutation = Mutation::LeftBiasedInstall;
            props_flags.suite.shrink = !no_shrink;
            return cmd_props(props_flags);
        }
    } catch (const Exit& e) {
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}
