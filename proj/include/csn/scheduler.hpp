#pragma once

// Scheduling policies and the run loop.

#include "csn/engine.hpp"
#include "csn/trace.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace csn {

/// Resolves the nondeterminism of one step. Given a nonempty list of
/// enabled choices, returns one of them.
class SchedulerPolicy {
public:
    virtual ~SchedulerPolicy() = default;
    virtual StepChoice choose(const Network& n, const std::vector<StepChoice>& enabled) = 0;
};

/// Visits sensors in list order, one step per turn. With burst set, a
/// sensor that starts delivering a broadcast keeps the turn until it has
/// delivered to every neighbour in range and released. A head that has run
/// `quantum` steps is switched out when other programs are waiting.
class RoundRobinPolicy : public SchedulerPolicy {
public:
    explicit RoundRobinPolicy(bool burst, std::uint32_t quantum = 8) : burst_(burst), quantum_(quantum) {}
    StepChoice choose(const Network& n, const std::vector<StepChoice>& enabled) override;

private:
    bool burst_;
    std::uint32_t quantum_;
    std::size_t cursor_ = 0;
    std::string focus_;
};

/// Uniform choices that ignore the order of the sensor list: a network
/// generator picks a sensor among those with choices, sorted by id, and that
/// sensor's own generator, seeded from (seed, id), picks its move.
/// Busy-waiting is skipped whenever the sensor could switch instead.
class RandomPolicy : public SchedulerPolicy {
public:
    explicit RandomPolicy(std::uint64_t seed);
    StepChoice choose(const Network& n, const std::vector<StepChoice>& enabled) override;

private:
    std::mt19937_64& rng_for(const std::string& id);

    std::uint64_t seed_;
    std::mt19937_64 global_;
    std::map<std::string, std::mt19937_64> per_sensor_;
};

/// Plays a fixed list of choices, then defers to the fallback. Throws
/// InvalidChoice if a scripted choice is not enabled when its turn comes.
class ScriptedPolicy : public SchedulerPolicy {
public:
    ScriptedPolicy(std::vector<StepChoice> script, std::unique_ptr<SchedulerPolicy> fallback)
        : script_(std::move(script)), fallback_(std::move(fallback))
    {
    }
    StepChoice choose(const Network& n, const std::vector<StepChoice>& enabled) override;

private:
    std::vector<StepChoice> script_;
    std::size_t next_ = 0;
    std::unique_ptr<SchedulerPolicy> fallback_;
};

struct StepBudget {
    std::uint64_t max_steps = 10000;
};

struct RunResult {
    Network network;
    Trace trace;
};

/// Steps until the network is quiescent, the budget runs out or a runtime
/// fault occurs. Quiescent means no choice is enabled, or only busy-waits
/// and switches are, and they have led back to an already seen state.
RunResult run(Network n, SchedulerPolicy& policy, StepBudget budget, const EngineOptions& opts = {});

} // namespace csn
