#pragma once

// Bounded breadth-first exploration of every interleaving.

#include "csn/engine.hpp"
#include "csn/type.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace csn {

/// A checked property. Each part returns a description of the violation,
/// or nothing when the property holds. Either part may be empty.
struct Property {
    std::string name;
    std::function<std::optional<std::string>(const Network&)> state;
    std::function<std::optional<std::string>(const Network& before, const StepChoice& c,
                                             const std::vector<TraceEvent>& events, const Network& after)>
        step;
};

/// Every state type-checks against iface. Results are cached per sensor
/// form; the property may be shared between threads.
Property well_typed_property(GlobalInterface iface);

/// A delivery never reaches a sensor already inside the sender's membrane,
/// nor the sender itself.
Property membrane_once_property();

/// Every step respects the energy thresholds and the range of the sender.
Property energy_gate_property();

/// "well-typed", "membrane-once" or "energy-gate".
Property property_by_name(const std::string& name, const GlobalInterface& iface);

struct ExploreOptions {
    std::size_t depth = 4;
    std::size_t max_states = 50000;
    unsigned jobs = 1;
    EngineOptions engine;
};

struct AllHold {
    std::size_t states = 0;
};

struct Counterexample {
    std::vector<StepChoice> path;
    std::string reason;
    std::size_t states = 0;
};

struct StateBudgetExceeded {
    std::size_t states = 0;
};

using ExploreResult = std::variant<AllHold, Counterexample, StateBudgetExceeded>;

/// Checks the property on the start state and on every state reachable in
/// at most opts.depth steps, deduplicating by canonical form. The first
/// violation in breadth-first order is returned. A step that raises a
/// runtime fault ends its branch.
ExploreResult explore(const Network& n, const Property& p, const ExploreOptions& opts = {});

} // namespace csn
