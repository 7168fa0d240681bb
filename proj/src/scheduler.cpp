#include "csn/scheduler.hpp"

#include <algorithm>
#include <unordered_set>

namespace csn {

namespace {

std::map<std::string, std::vector<StepChoice>> by_sensor(const std::vector<StepChoice>& enabled)
{
    std::map<std::string, std::vector<StepChoice>> out;
    for (const auto& c : enabled)
        out[acting_sensor(c)].push_back(c);
    return out;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

StepChoice RoundRobinPolicy::choose(const Network& n, const std::vector<StepChoice>& enabled)
{
    auto groups = by_sensor(enabled);

    if (burst_ && !focus_.empty()) {
        if (auto it = groups.find(focus_); it != groups.end()) {
            for (const auto& c : it->second)
                if (std::holds_alternative<BroadcastDeliver>(c))
                    return c;
            for (const auto& c : it->second)
                if (std::holds_alternative<BroadcastRelease>(c)) {
                    focus_.clear();
                    return c;
                }
        }
        focus_.clear();
    }

    auto pick = [&](const Sensor& s, const std::vector<StepChoice>& cs) -> StepChoice {
        const StepChoice* local = nullptr;
        const StepChoice* deliver = nullptr;
        const StepChoice* release = nullptr;
        const StepChoice* sw = nullptr;
        for (const auto& c : cs) {
            if (std::holds_alternative<LocalStep>(c))
                local = &c;
            else if (std::holds_alternative<BroadcastDeliver>(c))
                deliver = deliver ? deliver : &c;
            else if (std::holds_alternative<BroadcastRelease>(c))
                release = &c;
            else
                sw = &c;
        }
        bool can_switch = sw && s.queue.size() >= 2;
        if (local && is_productive(*local))
            return can_switch && s.head_steps >= quantum_ ? *sw : *local;
        if (deliver)
            return *deliver;
        if (release)
            return *release;
        if (can_switch)
            return *sw;
        if (local)
            return *local;
        return sw ? *sw : cs.front();
    };

    const std::size_t count = n.sensors.size();
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t idx = (cursor_ + k) % count;
        const Sensor& s = n.sensors[idx];
        auto it = groups.find(s.id);
        if (it == groups.end())
            continue;
        StepChoice c = pick(s, it->second);
        cursor_ = idx + 1;
        if (burst_ && std::holds_alternative<BroadcastDeliver>(c))
            focus_ = s.id;
        return c;
    }
    return enabled.front();
}

RandomPolicy::RandomPolicy(std::uint64_t seed) : seed_(seed), global_(splitmix64(seed)) {}

std::mt19937_64& RandomPolicy::rng_for(const std::string& id)
{
    auto it = per_sensor_.find(id);
    if (it == per_sensor_.end())
        it = per_sensor_.emplace(id, std::mt19937_64(splitmix64(seed_ ^ fnv1a(id)))).first;
    return it->second;
}

StepChoice RandomPolicy::choose(const Network& n, const std::vector<StepChoice>& enabled)
{
    auto groups = by_sensor(enabled);
    auto it = std::next(groups.begin(), static_cast<std::ptrdiff_t>(global_() % groups.size()));
    std::vector<StepChoice> cs = it->second;
    const Sensor* s = n.find(it->first);
    bool can_switch = s && s->queue.size() >= 2 &&
                      std::any_of(cs.begin(), cs.end(), [](const auto& c) { return std::holds_alternative<Switch>(c); });
    if (can_switch)
        std::erase_if(cs, [](const StepChoice& c) {
            auto l = std::get_if<LocalStep>(&c);
            return l && l->rule == Rule::NoMethodTop;
        });
    std::sort(cs.begin(), cs.end(),
              [](const StepChoice& a, const StepChoice& b) { return to_string(a) < to_string(b); });
    return cs[rng_for(it->first)() % cs.size()];
}

StepChoice ScriptedPolicy::choose(const Network& n, const std::vector<StepChoice>& enabled)
{
    if (next_ < script_.size()) {
        const StepChoice& c = script_[next_++];
        if (std::find(enabled.begin(), enabled.end(), c) == enabled.end())
            throw InvalidChoice("scripted choice " + to_string(c) + " is not enabled");
        return c;
    }
    return fallback_->choose(n, enabled);
}

RunResult run(Network n, SchedulerPolicy& policy, StepBudget budget, const EngineOptions& opts)
{
    RunResult r{std::move(n), {}};
    std::unordered_set<std::string> seen;
    std::uint64_t taken = 0;
    for (;;) {
        auto enabled = enabled_choices(r.network);
        if (enabled.empty()) {
            r.trace.outcome = Outcome::Quiescent;
            break;
        }
        if (std::none_of(enabled.begin(), enabled.end(), [](const auto& c) { return is_productive(c); }) &&
            !seen.insert(canonical_form(r.network)).second) {
            r.trace.outcome = Outcome::Quiescent;
            break;
        }
        if (taken >= budget.max_steps) {
            r.trace.outcome = Outcome::BudgetExhausted;
            break;
        }
        StepChoice c = policy.choose(r.network, enabled);
        try {
            step(r.network, c, &r.trace.events, opts);
        } catch (const RuntimeFault& e) {
            r.trace.outcome = Outcome::RuntimeError;
            r.trace.error = e.what();
            break;
        }
        ++taken;
        if (is_productive(c))
            seen.clear();
    }
    r.trace.steps = taken;
    return r;
}

} // namespace csn
