#include "csn/explore.hpp"

#include "csn/typecheck.hpp"

#include <atomic>
#include <memory>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace csn {

Property well_typed_property(GlobalInterface iface)
{
    struct Cache {
        std::mutex mutex;
        std::unordered_map<std::string, std::optional<std::string>> verdicts;
    };
    auto cache = std::make_shared<Cache>();
    Property p;
    p.name = "well-typed";
    p.state = [iface = std::move(iface), cache](const Network& n) -> std::optional<std::string> {
        for (const auto& s : n.sensors) {
            std::string key = canonical_form(s);
            std::optional<std::string> verdict;
            bool known = false;
            {
                std::lock_guard lock(cache->mutex);
                if (auto it = cache->verdicts.find(key); it != cache->verdicts.end()) {
                    verdict = it->second;
                    known = true;
                }
            }
            if (!known) {
                try {
                    check_sensor(iface, s);
                } catch (const TypeError& e) {
                    verdict = std::string(to_string(e.code())) + " in " + e.sensor() + " (" + e.location() +
                              "): " + e.detail();
                }
                std::lock_guard lock(cache->mutex);
                cache->verdicts.emplace(key, verdict);
            }
            if (verdict)
                return verdict;
        }
        return std::nullopt;
    };
    return p;
}

Property membrane_once_property()
{
    Property p;
    p.name = "membrane-once";
    p.step = [](const Network& before, const StepChoice& c, const std::vector<TraceEvent>&,
                const Network&) -> std::optional<std::string> {
        auto d = std::get_if<BroadcastDeliver>(&c);
        if (!d)
            return std::nullopt;
        if (d->sender == d->receiver)
            return "sensor " + d->sender + " delivered to itself";
        const Sensor* s = before.find(d->sender);
        if (s && s->membrane && s->membrane->delivered.contains(d->receiver))
            return "second delivery from " + d->sender + " to " + d->receiver + " within one broadcast";
        return std::nullopt;
    };
    return p;
}

Property energy_gate_property()
{
    Property p;
    p.name = "energy-gate";
    p.step = [](const Network& before, const StepChoice& c, const std::vector<TraceEvent>&,
                const Network&) -> std::optional<std::string> {
        const WorldConfig& w = *before.world;
        const Sensor* s = before.find(acting_sensor(c));
        if (!s)
            return "step by unknown sensor " + acting_sensor(c);
        if (s->energy < std::min(w.e_in, w.e_out))
            return "exhausted sensor " + s->id + " took " + to_string(c);
        if (std::holds_alternative<LocalStep>(c) && s->energy < w.e_in)
            return "local step by " + s->id + " below e_in";
        if (auto d = std::get_if<BroadcastDeliver>(&c)) {
            if (s->energy < w.e_out)
                return "delivery by " + s->id + " below e_out";
            const Sensor* t = before.find(d->receiver);
            if (!t || !(distance(s->position, t->position) < s->radius))
                return "delivery from " + s->id + " to " + d->receiver + " out of range";
        }
        return std::nullopt;
    };
    return p;
}

Property property_by_name(const std::string& name, const GlobalInterface& iface)
{
    if (name == "well-typed")
        return well_typed_property(iface);
    if (name == "membrane-once")
        return membrane_once_property();
    if (name == "energy-gate")
        return energy_gate_property();
    throw Error("unknown property '" + name + "'");
}

namespace {

struct Node {
    std::size_t parent;
    std::optional<StepChoice> via;
};

struct Successor {
    StepChoice choice;
    std::size_t parent;
    Network network;
    std::string key;
    std::optional<std::string> step_violation;
    std::optional<std::string> state_violation;
};

std::vector<StepChoice> path_to(const std::vector<Node>& nodes, std::size_t i)
{
    std::vector<StepChoice> path;
    while (nodes[i].via) {
        path.push_back(*nodes[i].via);
        i = nodes[i].parent;
    }
    return {path.rbegin(), path.rend()};
}

} // namespace

ExploreResult explore(const Network& start, const Property& p, const ExploreOptions& opts)
{
    Network root = start;
    root.logs = LogStore{};

    std::vector<Node> nodes{Node{0, std::nullopt}};
    std::unordered_set<std::string> seen{canonical_form(root)};
    if (p.state)
        if (auto v = p.state(root))
            return Counterexample{{}, *v, seen.size()};

    std::vector<std::pair<Network, std::size_t>> frontier;
    frontier.emplace_back(std::move(root), 0);

    for (std::size_t level = 0; level < opts.depth && !frontier.empty(); ++level) {
        std::vector<std::vector<Successor>> expanded(frontier.size());
        auto expand = [&](std::size_t i) {
            const auto& [net, id] = frontier[i];
            for (const auto& c : enabled_choices(net)) {
                Successor s{c, id, net, {}, std::nullopt, std::nullopt};
                std::vector<TraceEvent> events;
                try {
                    step(s.network, c, &events, opts.engine);
                } catch (const RuntimeFault&) {
                    continue;
                }
                if (p.step)
                    s.step_violation = p.step(net, c, events, s.network);
                s.key = canonical_form(s.network);
                if (p.state && !s.step_violation && !seen.contains(s.key))
                    s.state_violation = p.state(s.network);
                expanded[i].push_back(std::move(s));
            }
        };

        unsigned jobs = std::max(1u, opts.jobs);
        if (jobs == 1 || frontier.size() < 2) {
            for (std::size_t i = 0; i < frontier.size(); ++i)
                expand(i);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> workers;
            for (unsigned j = 0; j < jobs; ++j)
                workers.emplace_back([&] {
                    for (std::size_t i; (i = next.fetch_add(1)) < frontier.size();)
                        expand(i);
                });
            for (auto& t : workers)
                t.join();
        }

        std::vector<std::pair<Network, std::size_t>> next_frontier;
        for (auto& group : expanded) {
            for (auto& s : group) {
                if (s.step_violation) {
                    auto path = path_to(nodes, s.parent);
                    path.push_back(s.choice);
                    return Counterexample{std::move(path), *s.step_violation, seen.size()};
                }
                if (!seen.insert(s.key).second)
                    continue;
                nodes.push_back(Node{s.parent, s.choice});
                if (s.state_violation)
                    return Counterexample{path_to(nodes, nodes.size() - 1), *s.state_violation, seen.size()};
                if (seen.size() > opts.max_states)
                    return StateBudgetExceeded{seen.size()};
                next_frontier.emplace_back(std::move(s.network), nodes.size() - 1);
            }
        }
        frontier = std::move(next_frontier);
    }
    return AllHold{seen.size()};
}

} // namespace csn
