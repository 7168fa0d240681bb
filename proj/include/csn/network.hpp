#pragma once

#include "csn/syntax.hpp"
#include "csn/world.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace csn {

enum class SensorStatus { Online, Off };

/// Receivers already engulfed by the current broadcast.
struct BroadcastState {
    std::set<std::string> delivered;
    friend bool operator==(const BroadcastState&, const BroadcastState&) = default;
};

struct Sensor {
    std::string id;
    SensorStatus status = SensorStatus::Online;
    std::deque<Program> queue;
    Object object;
    Position position;
    double radius = 0.0;
    double energy = 0.0;
    std::optional<BroadcastState> membrane;
    // Steps taken by the current head program since it reached the head.
    // Scheduling bookkeeping only; not part of the calculus state.
    std::uint32_t head_steps = 0;
};

struct Network {
    std::vector<Sensor> sensors;
    std::shared_ptr<const WorldConfig> world = std::make_shared<const WorldConfig>();
    std::uint64_t step_count = 0;
    LogStore logs;

    const Sensor* find(const std::string& id) const;
    Sensor* find(const std::string& id);
};

/// Online and with energy for at least one kind of step.
bool is_active(const Sensor& s, const WorldConfig& world);

/// Text identifying a sensor's calculus state up to alpha-equivalence.
/// Scheduling bookkeeping (head_steps) is left out.
std::string canonical_form(const Sensor& s);

/// Sensor forms in id order; step counter and logs are left out, so two
/// networks with equal forms have the same futures.
std::string canonical_form(const Network& n);

} // namespace csn
