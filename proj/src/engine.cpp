#include "csn/engine.hpp"

#include "csn/printer.hpp"

#include <algorithm>
#include <cmath>

namespace csn {

Decomposition decompose(const Program& p)
{
    Redex r{{}, p};
    for (;;) {
        const Let* let = r.core.as<Let>();
        if (!let || let->bound.as<Val>())
            break;
        r.context.push_back(Frame{let->binder, let->body});
        r.core = let->bound;
    }
    if (r.context.empty()) {
        if (const Val* v = r.core.as<Val>())
            return Completed{v->value};
    }
    return r;
}

Program plug(const std::vector<Frame>& context, Program core)
{
    for (auto it = context.rbegin(); it != context.rend(); ++it)
        core = make_let(it->binder, std::move(core), it->body);
    return core;
}

std::string_view rule_name(Rule r)
{
    switch (r) {
    case Rule::MethodTop:
        return "method-top";
    case Rule::NoMethodTop:
        return "no-method-top";
    case Rule::Method:
        return "method";
    case Rule::BroadcastDeliver:
        return "broadcast-deliver";
    case Rule::Release:
        return "release";
    case Rule::InstallTop:
        return "install-top";
    case Rule::Install:
        return "install";
    case Rule::Let:
        return "let";
    case Rule::Switch:
        return "switch";
    case Rule::Complete:
        return "complete";
    }
    return "?";
}

std::string to_string(const StepChoice& c)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, LocalStep>)
                return std::string(rule_name(x.rule)) + "(" + x.sensor + ")";
            else if constexpr (std::is_same_v<X, BroadcastDeliver>)
                return "broadcast-deliver(" + x.sender + " -> " + x.receiver + ")";
            else if constexpr (std::is_same_v<X, BroadcastRelease>)
                return "release(" + x.sender + ")";
            else
                return "switch(" + x.sensor + ")";
        },
        c);
}

const std::string& acting_sensor(const StepChoice& c)
{
    return std::visit(
        [](const auto& x) -> const std::string& {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, BroadcastDeliver> || std::is_same_v<X, BroadcastRelease>)
                return x.sender;
            else
                return x.sensor;
        },
        c);
}

bool is_productive(const StepChoice& c)
{
    if (std::holds_alternative<Switch>(c))
        return false;
    if (auto l = std::get_if<LocalStep>(&c))
        return l->rule != Rule::NoMethodTop;
    return true;
}

RuntimeFault::RuntimeFault(std::string sensor, const std::string& message)
    : Error(sensor + ": " + message), sensor_(std::move(sensor))
{
}

namespace {

enum class HeadKind { Empty, Local, Broadcast, Stuck };

// What the head program of a sensor can do next.
struct Head {
    HeadKind kind = HeadKind::Empty;
    Rule rule = Rule::Let;
    Redex redex{{}, make_value(unit())};
    Value completed;
};

Head analyze(const Sensor& s, const WorldConfig& world)
{
    Head h;
    if (s.queue.empty())
        return h;
    auto d = decompose(s.queue.front());
    if (auto c = std::get_if<Completed>(&d)) {
        h.kind = HeadKind::Local;
        h.rule = Rule::Complete;
        h.completed = c->value;
        return h;
    }
    h.redex = std::get<Redex>(std::move(d));
    h.kind = HeadKind::Local;
    const Program& core = h.redex.core;
    if (core.as<Let>()) {
        h.rule = Rule::Let;
    } else if (const Call* call = core.as<Call>()) {
        if (std::holds_alternative<LocValue>(call->target)) {
            bool known = s.object.find(call->method) || (world.builtins && world.builtins->find(call->method));
            h.rule = known ? Rule::MethodTop : Rule::NoMethodTop;
        } else if (std::holds_alternative<NetValue>(call->target)) {
            h.kind = HeadKind::Broadcast;
        } else if (const Object* o = as_object(call->target)) {
            const Method* m = o->find(call->method);
            if (m && m->params.size() == call->args.size())
                h.rule = Rule::Method;
            else
                h.kind = HeadKind::Stuck;
        } else {
            h.kind = HeadKind::Stuck;
        }
    } else if (const Install* ins = core.as<Install>()) {
        if (!as_object(ins->addition))
            h.kind = HeadKind::Stuck;
        else if (std::holds_alternative<LocValue>(ins->target))
            h.rule = Rule::InstallTop;
        else if (as_object(ins->target))
            h.rule = Rule::Install;
        else
            h.kind = HeadKind::Stuck;
    } else {
        h.kind = HeadKind::Stuck;
    }
    return h;
}

void choices_for(const Network& n, const Sensor& s, std::vector<StepChoice>& out)
{
    const WorldConfig& w = *n.world;
    if (!is_active(s, w) || s.queue.empty())
        return;
    Head h = analyze(s, w);
    if (h.kind == HeadKind::Local && s.energy >= w.e_in) {
        out.push_back(LocalStep{s.id, h.rule});
    } else if (h.kind == HeadKind::Broadcast) {
        if (s.energy >= w.e_out) {
            for (const auto& t : n.sensors) {
                if (t.id == s.id || !is_active(t, w))
                    continue;
                if (s.membrane && s.membrane->delivered.contains(t.id))
                    continue;
                if (distance(s.position, t.position) < s.radius)
                    out.push_back(BroadcastDeliver{s.id, t.id});
            }
        }
        out.push_back(BroadcastRelease{s.id});
    }
    if (!s.membrane)
        out.push_back(Switch{s.id});
}

std::string print_args(const std::vector<Value>& args)
{
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i)
        out += (i ? ", " : "") + pretty_print(args[i]);
    return out;
}

std::string label_list(const Object& o)
{
    std::string out;
    for (const auto& [label, m] : o.methods)
        out += (out.empty() ? "" : ",") + label.name;
    return out;
}

Substitution bind_params(const Method& m, const std::vector<Value>& args)
{
    Substitution s;
    for (std::size_t i = 0; i < m.params.size(); ++i)
        s.insert_or_assign(m.params[i], args[i]);
    return s;
}

void charge(Sensor& s, double amount)
{
    s.energy = std::max(0.0, s.energy - amount);
}

} // namespace

std::vector<StepChoice> enabled_choices(const Network& n, const Sensor& s)
{
    std::vector<StepChoice> out;
    choices_for(n, s, out);
    return out;
}

std::vector<StepChoice> enabled_choices(const Network& n)
{
    std::vector<StepChoice> out;
    for (const auto& s : n.sensors)
        choices_for(n, s, out);
    return out;
}

void step(Network& n, const StepChoice& c, std::vector<TraceEvent>* events, const EngineOptions& opts)
{
    Sensor* s = n.find(acting_sensor(c));
    if (!s)
        throw InvalidChoice("no sensor '" + acting_sensor(c) + "'");
    auto enabled = enabled_choices(n, *s);
    if (std::find(enabled.begin(), enabled.end(), c) == enabled.end())
        throw InvalidChoice("choice " + to_string(c) + " is not enabled");

    const WorldConfig& w = *n.world;
    const std::uint64_t now = n.step_count + 1;
    StepEvent ev;
    ev.step = now;
    ev.sensor = s->id;
    std::vector<LogEvent> logged;

    if (std::holds_alternative<Switch>(c)) {
        ev.rule = Rule::Switch;
        s->queue.push_back(s->queue.front());
        s->queue.pop_front();
        s->head_steps = 0;
        ev.detail.emplace_back("queue", std::to_string(s->queue.size()));
    } else if (auto del = std::get_if<BroadcastDeliver>(&c)) {
        const Call& call = *std::get<Redex>(decompose(s->queue.front())).core.as<Call>();
        Sensor* t = n.find(del->receiver);
        ev.rule = Rule::BroadcastDeliver;
        Program msg = make_call(loc(), call.method, call.args);
        ev.detail.emplace_back("receiver", t->id);
        ev.detail.emplace_back("call", pretty_print(msg));
        t->queue.push_back(std::move(msg));
        if (!s->membrane)
            s->membrane.emplace();
        s->membrane->delivered.insert(t->id);
        ++s->head_steps;
    } else if (std::holds_alternative<BroadcastRelease>(c)) {
        Redex r = std::get<Redex>(decompose(s->queue.front()));
        const Call& call = *r.core.as<Call>();
        ev.rule = Rule::Release;
        ev.detail.emplace_back("label", call.method.name);
        ev.detail.emplace_back("delivered", std::to_string(s->membrane ? s->membrane->delivered.size() : 0));
        s->queue.front() = plug(r.context, make_value(empty_object()));
        s->membrane.reset();
        if (w.metering)
            charge(*s, w.e_out);
        ++s->head_steps;
    } else {
        const Rule rule = std::get<LocalStep>(c).rule;
        ev.rule = rule;
        Head h = analyze(*s, w);
        Program next = s->queue.front();
        switch (rule) {
        case Rule::Complete:
            ev.detail.emplace_back("value", pretty_print(h.completed));
            break;
        case Rule::Let: {
            const Let& let = *h.redex.core.as<Let>();
            const Value& v = let.bound.as<Val>()->value;
            ev.detail.emplace_back("value", pretty_print(v));
            next = plug(h.redex.context, substitute(let.body, Substitution{{let.binder, v}}));
            break;
        }
        case Rule::NoMethodTop: {
            const Call& call = *h.redex.core.as<Call>();
            ev.detail.emplace_back("label", call.method.name);
            break;
        }
        case Rule::MethodTop: {
            const Call& call = *h.redex.core.as<Call>();
            ev.detail.emplace_back("label", call.method.name);
            ev.detail.emplace_back("args", print_args(call.args));
            if (const Method* m = s->object.find(call.method)) {
                if (m->params.size() != call.args.size())
                    throw RuntimeFault(s->id, "method '" + call.method.name + "' expects " +
                                                  std::to_string(m->params.size()) + " argument(s), got " +
                                                  std::to_string(call.args.size()));
                next = plug(h.redex.context, substitute(m->body, bind_params(*m, call.args)));
            } else {
                const Builtin* b = w.builtins->find(call.method);
                if (b->signature.params.size() != call.args.size())
                    throw RuntimeFault(s->id, "built-in '" + call.method.name + "' expects " +
                                                  std::to_string(b->signature.params.size()) +
                                                  " argument(s), got " + std::to_string(call.args.size()));
                auto before = n.logs.entries(s->id).size();
                BuiltinContext ctx{s->id, s->position, w, n.logs, now};
                Value result = call_builtin(call.method, call.args, ctx);
                const auto& entries = n.logs.entries(s->id);
                for (auto i = before; i < entries.size(); ++i)
                    logged.push_back(LogEvent{now, s->id, entries[i].builtin, entries[i].value});
                ev.detail.emplace_back("builtin", call.method.name);
                ev.detail.emplace_back("result", pretty_print(result));
                next = plug(h.redex.context, make_value(std::move(result)));
            }
            break;
        }
        case Rule::Method: {
            const Call& call = *h.redex.core.as<Call>();
            const Method& m = *as_object(call.target)->find(call.method);
            ev.detail.emplace_back("label", call.method.name);
            ev.detail.emplace_back("args", print_args(call.args));
            next = plug(h.redex.context, substitute(m.body, bind_params(m, call.args)));
            break;
        }
        case Rule::InstallTop: {
            const Install& ins = *h.redex.core.as<Install>();
            const Object& add = *as_object(ins.addition);
            ev.detail.emplace_back("labels", label_list(add));
            s->object = object_update(s->object, add);
            next = plug(h.redex.context, make_value(s->object));
            break;
        }
        case Rule::Install: {
            const Install& ins = *h.redex.core.as<Install>();
            const Object& base = *as_object(ins.target);
            const Object& add = *as_object(ins.addition);
            ev.detail.emplace_back("labels", label_list(add));
            Object result = opts.mutation == Mutation::LeftBiasedInstall ? object_update(add, base)
                                                                         : object_update(base, add);
            next = plug(h.redex.context, make_value(std::move(result)));
            break;
        }
        default:
            throw InvalidChoice("rule " + std::string(rule_name(rule)) + " is not a local step");
        }
        if (rule == Rule::Complete) {
            s->queue.pop_front();
            s->head_steps = 0;
        } else {
            s->queue.front() = std::move(next);
            ++s->head_steps;
            if (w.metering && rule != Rule::NoMethodTop)
                charge(*s, w.e_in);
        }
    }

    n.step_count = now;
    if (events) {
        events->push_back(std::move(ev));
        for (auto& l : logged)
            events->push_back(std::move(l));
    }
}

Network apply_step(const Network& n, const StepChoice& c, const EngineOptions& opts)
{
    Network out = n;
    step(out, c, nullptr, opts);
    return out;
}

} // namespace csn
