#pragma once

// Small-step reduction of sensor networks.
//
// A step is chosen explicitly: enabled_choices lists every move the rules
// license in the current network and step() performs one of them. Policies
// (scheduler.hpp) and the state explorer (explore.hpp) sit on top.

#include "csn/network.hpp"
#include "csn/syntax.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace csn {

/// One `let x = [] in body` frame of a reduction context.
struct Frame {
    Variable binder;
    Program body;
};

/// Context frames outermost first, and the program sitting in the hole.
struct Redex {
    std::vector<Frame> context;
    Program core;
};

struct Completed {
    Value value;
};

using Decomposition = std::variant<Redex, Completed>;

/// Peels let frames whose bound program is not yet a value. A let with a
/// value bound is itself the core.
Decomposition decompose(const Program& p);

/// Rebuilds a program from its context and a core.
Program plug(const std::vector<Frame>& context, Program core);

enum class Rule {
    MethodTop,
    NoMethodTop,
    Method,
    BroadcastDeliver,
    Release,
    InstallTop,
    Install,
    Let,
    Switch,
    Complete,
};

std::string_view rule_name(Rule r);

struct LocalStep {
    std::string sensor;
    Rule rule;
    friend bool operator==(const LocalStep&, const LocalStep&) = default;
};

struct BroadcastDeliver {
    std::string sender;
    std::string receiver;
    friend bool operator==(const BroadcastDeliver&, const BroadcastDeliver&) = default;
};

struct BroadcastRelease {
    std::string sender;
    friend bool operator==(const BroadcastRelease&, const BroadcastRelease&) = default;
};

struct Switch {
    std::string sensor;
    friend bool operator==(const Switch&, const Switch&) = default;
};

using StepChoice = std::variant<LocalStep, BroadcastDeliver, BroadcastRelease, Switch>;

std::string to_string(const StepChoice& c);

/// The sensor a choice belongs to (the sender, for broadcasts).
const std::string& acting_sensor(const StepChoice& c);

/// Busy-waiting and queue rotation make no progress by themselves.
bool is_productive(const StepChoice& c);

struct StepEvent {
    std::uint64_t step = 0;
    Rule rule = Rule::Let;
    std::string sensor;
    // Printed terms and names only, in a fixed key order.
    std::vector<std::pair<std::string, std::string>> detail;
};

struct LogEvent {
    std::uint64_t step = 0;
    std::string sensor;
    std::string builtin;
    Value value;
};

using TraceEvent = std::variant<StepEvent, LogEvent>;

class InvalidChoice : public Error {
public:
    using Error::Error;
};

/// A present method or built-in called with the wrong number of arguments.
class RuntimeFault : public Error {
public:
    RuntimeFault(std::string sensor, const std::string& message);
    const std::string& sensor() const { return sensor_; }

private:
    std::string sensor_;
};

enum class Mutation {
    None,
    // Test fixture: install computes O'' + O' instead of O' + O''.
    LeftBiasedInstall,
};

struct EngineOptions {
    Mutation mutation = Mutation::None;
};

std::vector<StepChoice> enabled_choices(const Network& n);

/// Choices for one sensor, in the order enabled_choices lists them.
std::vector<StepChoice> enabled_choices(const Network& n, const Sensor& s);

/// Performs c in place. Throws InvalidChoice if c is not enabled and
/// RuntimeFault on an arity fault; n is unchanged in both cases.
void step(Network& n, const StepChoice& c, std::vector<TraceEvent>* events = nullptr,
          const EngineOptions& opts = {});

Network apply_step(const Network& n, const StepChoice& c, const EngineOptions& opts = {});

} // namespace csn
