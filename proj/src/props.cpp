#include "csn/props.hpp"

#include "csn/parser.hpp"
#include "csn/typecheck.hpp"

#include <atomic>
#include <optional>
#include <thread>

namespace csn {

namespace {

std::optional<Counterexample> failure_of(const Network& n, const GlobalInterface& iface, const ExploreOptions& opts)
{
    if (!check_network(iface, n).empty())
        return std::nullopt;
    auto r = explore(n, well_typed_property(iface), opts);
    if (auto c = std::get_if<Counterexample>(&r))
        return *c;
    return std::nullopt;
}

struct Outcome {
    ExploreResult result;
    std::optional<SuiteFailure> failure;
};

} // namespace

Network shrink_counterexample(const Network& n, const GlobalInterface& iface, const ExploreOptions& opts)
{
    Network best = n;
    auto try_accept = [&](Network candidate) {
        if (!failure_of(candidate, iface, opts))
            return false;
        best = std::move(candidate);
        return true;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < best.sensors.size() && !changed; ++i) {
            Network c = best;
            c.sensors.erase(c.sensors.begin() + static_cast<std::ptrdiff_t>(i));
            changed = try_accept(std::move(c));
        }
        for (std::size_t i = 0; i < best.sensors.size() && !changed; ++i) {
            for (std::size_t k = 0; k < best.sensors[i].queue.size() && !changed; ++k) {
                Network c = best;
                auto& q = c.sensors[i].queue;
                q.erase(q.begin() + static_cast<std::ptrdiff_t>(k));
                changed = try_accept(std::move(c));
            }
            std::vector<Label> labels;
            for (const auto& [l, m] : best.sensors[i].object.methods)
                labels.push_back(l);
            for (const auto& l : labels) {
                if (changed)
                    break;
                Network c = best;
                c.sensors[i].object.methods.erase(l);
                changed = try_accept(std::move(c));
            }
        }
    }
    return best;
}

SuiteReport subject_reduction_suite(const GenConfig& cfg, const SuiteOptions& opts)
{
    ExploreOptions eo;
    eo.depth = opts.depth;
    eo.max_states = opts.max_states;
    eo.engine = opts.engine;

    const auto count = static_cast<std::size_t>(std::max(0, opts.instances));
    std::vector<std::optional<Outcome>> outcomes(count);
    std::vector<std::string> errors(count);

    auto work = [&](std::size_t i) {
        GenConfig c = cfg;
        c.seed = cfg.seed + i;
        try {
            GlobalInterface iface = generation_interface(c);
            Network n = gen_well_typed_network(c);
            Outcome o{explore(n, well_typed_property(iface), eo), std::nullopt};
            if (auto cex = std::get_if<Counterexample>(&o.result)) {
                Network shown = opts.shrink ? shrink_counterexample(n, iface, eo) : n;
                Counterexample reported = *cex;
                if (opts.shrink)
                    if (auto again = failure_of(shown, iface, eo))
                        reported = *again;
                o.failure = SuiteFailure{c.seed, iface, std::move(shown), std::move(reported)};
            }
            outcomes[i] = std::move(o);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };

    unsigned jobs = std::max(1u, opts.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i)
            work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (unsigned j = 0; j < jobs; ++j)
            workers.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < count;)
                    work(i);
            });
        for (auto& t : workers)
            t.join();
    }

    SuiteReport report;
    report.instances = static_cast<int>(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!errors[i].empty())
            throw Error(errors[i]);
        auto& o = *outcomes[i];
        std::visit([&](const auto& r) { report.states += r.states; }, o.result);
        if (std::holds_alternative<AllHold>(o.result))
            ++report.passed;
        else if (std::holds_alternative<StateBudgetExceeded>(o.result))
            ++report.skipped;
        if (o.failure)
            report.failures.push_back(std::move(*o.failure));
    }
    return report;
}

std::string to_source(const Network& n, const GlobalInterface& iface)
{
    return pretty_print(to_source_unit(n, iface));
}

} // namespace csn
