#include "csn/props.hpp"

#include "csn/typecheck.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <random>

namespace csn {

namespace {

// Labels of anonymous objects never collide with interface labels, so a
// generated literal is never mistaken for a sensor object.
constexpr std::array<const char*, 3> kAnonLabels = {"f", "g", "h"};
constexpr std::array<const char*, 8> kInterfaceLabels = {"ping",   "forward", "sample", "deploy",
                                                         "report", "relay",   "tick",   "store"};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

    template <class T>
    const T& pick(const std::vector<T>& xs)
    {
        return xs[static_cast<std::size_t>(below(static_cast<int>(xs.size())))];
    }

private:
    std::mt19937_64 engine_;
};

Type flip(const Type& t)
{
    return t.tag() == Type::Tag::Builtin ? Type::empty_object() : Type::builtin();
}

class Generator {
public:
    Generator(const GlobalInterface& iface, std::uint64_t seed) : iface_(iface), rng_(seed) {}

    Rng& rng() { return rng_; }

    Object sensor_object(int max_methods, int depth)
    {
        std::vector<Label> labels;
        for (const auto& [l, m] : iface_.methods())
            if (!is_builtin(l))
                labels.push_back(l);
        std::shuffle(labels.begin(), labels.end(), std::mt19937_64(rng_.below(1 << 30)));
        auto count = static_cast<std::size_t>(rng_.below(std::min<int>(max_methods, int(labels.size())) + 1));
        Object o;
        for (std::size_t i = 0; i < count; ++i)
            o.methods.emplace(labels[i], method(*iface_.find(labels[i]), {}, depth));
        return o;
    }

    Program program(const TypingEnv& env, const Type& t, int depth)
    {
        if (depth <= 0)
            return make_value(value(env, t, 0));

        std::vector<std::pair<int, std::function<Program()>>> options;
        options.emplace_back(2, [&] { return make_value(value(env, t, depth)); });
        options.emplace_back(3, [&] {
            Type u = any_type();
            Variable x = fresh("x");
            Program bound = program(env, u, depth - 1);
            TypingEnv inner = env;
            inner.insert_or_assign(x, u);
            return make_let(x, std::move(bound), program(inner, t, depth - 1));
        });

        std::vector<Label> local;
        for (const auto& [l, m] : iface_.methods())
            if (m.result == t)
                local.push_back(l);
        if (!local.empty())
            options.emplace_back(3, [&, local] {
                const Label& l = rng_.pick(local);
                return make_call(loc(), l, args(env, iface_.find(l)->params, depth));
            });

        if (t == Type::empty_object() && !iface_.methods().empty())
            options.emplace_back(3, [&] {
                std::vector<Label> all;
                for (const auto& [l, m] : iface_.methods())
                    all.push_back(l);
                const Label& l = rng_.pick(all);
                return make_call(net(), l, args(env, iface_.find(l)->params, depth));
            });

        options.emplace_back(2, [&] {
            Label l{kAnonLabels[static_cast<std::size_t>(rng_.below(3))]};
            MethodTypes ms{{l, MethodType{params(), t}}};
            if (rng_.chance(0.3)) {
                Label other{kAnonLabels[static_cast<std::size_t>(rng_.below(3))]};
                ms.emplace(other, MethodType{params(), simple_type()});
            }
            Type ot = Type::object(ObjectKind::Plain, ms);
            Value target = rng_.chance(0.5) ? Value{object(env, ot, depth - 1)} : value(env, ot, depth - 1);
            return make_call(std::move(target), l, args(env, ms.at(l).params, depth));
        });

        std::vector<std::pair<Variable, Label>> callable;
        for (const auto& [x, xt] : env)
            if (xt.is_object())
                for (const auto& [l, m] : xt.methods())
                    if (m.result == t)
                        callable.emplace_back(x, l);
        if (!callable.empty())
            options.emplace_back(3, [&, callable] {
                const auto& [x, l] = rng_.pick(callable);
                return make_call(x, l, args(env, env.at(x).find(l)->params, depth));
            });

        if (t.is_object() && t.kind() == ObjectKind::Plain)
            options.emplace_back(2, [&] { return install_plain(env, t, depth); });
        if (t == iface_.type)
            options.emplace_back(3, [&] { return install_top(env, depth); });
        if (depth >= 2)
            options.emplace_back(1, [&] { return overlap_probe(env, t, depth); });

        int total = 0;
        for (const auto& o : options)
            total += o.first;
        int roll = rng_.below(total);
        for (const auto& o : options) {
            if (roll < o.first)
                return o.second();
            roll -= o.first;
        }
        return options.front().second();
    }

    Type any_type()
    {
        int r = rng_.below(10);
        if (r < 3)
            return Type::builtin();
        if (r < 5)
            return Type::empty_object();
        if (r < 8)
            return anon_type();
        if (r < 9)
            return iface_.type;
        return Type::net();
    }

private:
    bool is_builtin(const Label& l) const
    {
        static const BuiltinTable table = BuiltinTable::standard();
        return table.find(l) != nullptr;
    }

    Variable fresh(const char* base) { return Variable{base + std::to_string(++counter_)}; }

    Type simple_type() { return rng_.chance(0.5) ? Type::builtin() : Type::empty_object(); }

    std::vector<Type> params()
    {
        std::vector<Type> ps;
        for (int n = rng_.below(3); n > 0; --n)
            ps.push_back(simple_type());
        return ps;
    }

    Type anon_type()
    {
        MethodTypes ms;
        int n = 1 + rng_.below(2);
        for (int i = 0; i < n; ++i)
            ms.insert_or_assign(Label{kAnonLabels[static_cast<std::size_t>(rng_.below(3))]},
                                MethodType{params(), simple_type()});
        return Type::object(ObjectKind::Plain, std::move(ms));
    }

    std::vector<Value> args(const TypingEnv& env, const std::vector<Type>& types, int depth)
    {
        std::vector<Value> out;
        for (const auto& t : types)
            out.push_back(value(env, t, depth - 1));
        return out;
    }

    Method method(const MethodType& mt, const TypingEnv& env, int depth)
    {
        Method m{{}, make_value(unit())};
        TypingEnv inner = env;
        for (const auto& p : mt.params) {
            Variable x = fresh("p");
            m.params.push_back(x);
            inner.insert_or_assign(x, p);
        }
        m.body = program(inner, mt.result, depth - 1);
        return m;
    }

    Object object(const TypingEnv& env, const Type& t, int depth)
    {
        Object o;
        for (const auto& [l, mt] : t.methods())
            o.methods.emplace(l, method(mt, env, depth));
        return o;
    }

    Value value(const TypingEnv& env, const Type& t, int depth)
    {
        std::vector<Variable> vars;
        for (const auto& [x, xt] : env)
            if (xt == t)
                vars.push_back(x);
        if (!vars.empty() && rng_.chance(0.5))
            return rng_.pick(vars);
        switch (t.tag()) {
        case Type::Tag::Builtin:
            switch (rng_.below(3)) {
            case 0:
                return number(rng_.below(10) + (rng_.chance(0.3) ? 0.5 : 0.0));
            case 1:
                return symbol("m" + std::to_string(rng_.below(4)));
            default:
                return unit();
            }
        case Type::Tag::Net:
            return net();
        case Type::Tag::Object:
            if (t.kind() == ObjectKind::Sensor)
                return loc();
            return object(env, t, depth);
        case Type::Tag::Var:
            break;
        }
        return unit();
    }

    // install O1 O2 with O1 (+) O2 = t. O1 may carry a label of O2 at a
    // different type, which O2 overrides.
    Program install_plain(const TypingEnv& env, const Type& t, int depth)
    {
        MethodTypes base;
        MethodTypes addition;
        for (const auto& [l, mt] : t.methods()) {
            if (rng_.chance(0.5)) {
                addition.emplace(l, mt);
                if (rng_.chance(0.4))
                    base.emplace(l, rng_.chance(0.5) ? mt : MethodType{mt.params, flip(mt.result)});
            } else {
                base.emplace(l, mt);
            }
        }
        Type t1 = Type::object(ObjectKind::Plain, std::move(base));
        Type t2 = Type::object(ObjectKind::Plain, std::move(addition));
        return make_install(value(env, t1, depth - 1), value(env, t2, depth - 1));
    }

    // install loc O where O implements some interface methods exactly.
    Program install_top(const TypingEnv& env, int depth)
    {
        MethodTypes ms;
        for (const auto& [l, mt] : iface_.methods())
            if (!is_builtin(l) && rng_.chance(0.4))
                ms.emplace(l, mt);
        return make_install(loc(), object(env, Type::object(ObjectKind::Plain, std::move(ms)), depth - 1));
    }

    // let r = install { f = () b } { f = () {} } in let y = r.f() in
    // let z = install y {} in P. Only right-biased install keeps y an
    // object.
    Program overlap_probe(const TypingEnv& env, const Type& t, int depth)
    {
        Label f{kAnonLabels[static_cast<std::size_t>(rng_.below(3))]};
        Object older;
        older.methods.emplace(f, Method{{}, make_value(value(env, Type::builtin(), 0))});
        Object newer;
        newer.methods.emplace(f, Method{{}, make_value(empty_object())});
        Variable r = fresh("r");
        Variable y = fresh("y");
        Variable z = fresh("z");
        TypingEnv inner = env;
        inner.insert_or_assign(r, Type::object(ObjectKind::Plain, {{f, MethodType{{}, Type::empty_object()}}}));
        inner.insert_or_assign(y, Type::empty_object());
        inner.insert_or_assign(z, Type::empty_object());
        Program rest = program(inner, t, depth - 1);
        return make_let(r, make_install(older, newer),
                        make_let(y, make_call(r, f, {}),
                                 make_let(z, make_install(y, empty_object()), std::move(rest))));
    }

    const GlobalInterface& iface_;
    Rng rng_;
    int counter_ = 0;
};

} // namespace

GlobalInterface default_generated_interface(std::uint64_t seed)
{
    Rng rng(seed ^ 0x5eedf00dULL);
    std::vector<std::string> names(kInterfaceLabels.begin(), kInterfaceLabels.end());
    std::shuffle(names.begin(), names.end(), std::mt19937_64(seed));
    int count = 3 + rng.below(4);
    MethodTypes ms;
    for (int i = 0; i < count; ++i) {
        std::vector<Type> params;
        for (int n = rng.below(3); n > 0; --n)
            params.push_back(rng.chance(0.5) ? Type::builtin() : Type::empty_object());
        ms.emplace(Label{names[static_cast<std::size_t>(i)]},
                   MethodType{std::move(params), rng.chance(0.5) ? Type::builtin() : Type::empty_object()});
    }
    const BuiltinTable builtins = BuiltinTable::standard();
    for (const auto& [l, b] : builtins.entries())
        ms.insert_or_assign(l, b.signature);
    return GlobalInterface(std::move(ms));
}

GlobalInterface generation_interface(const GenConfig& cfg)
{
    return cfg.interface.methods().empty() ? default_generated_interface(cfg.seed) : cfg.interface;
}

Network gen_well_typed_network(const GenConfig& cfg)
{
    if (cfg.max_sensors < 1 || cfg.max_methods < 1 || cfg.max_program_depth < 1)
        throw Error("generator limits must be at least 1");
    GlobalInterface iface = generation_interface(cfg);
    Generator g(iface, cfg.seed);
    Rng& rng = g.rng();

    auto world = std::make_shared<WorldConfig>();
    world->e_in = 1.0;
    world->e_out = 2.0;
    world->field = GaussianField{{1.0, 0.5}, 10.0, 1.0};

    Network n;
    n.world = world;
    int count = 1 + rng.below(cfg.max_sensors);
    for (int i = 0; i < count; ++i) {
        Sensor s;
        s.id = "n" + std::to_string(i);
        s.position = {static_cast<double>(rng.below(3)), static_cast<double>(rng.below(2))};
        s.radius = std::array{0.5, 1.5, 2.5}[static_cast<std::size_t>(rng.below(3))];
        int roll = rng.below(10);
        s.energy = roll < 8 ? 10.0 : roll < 9 ? 1.5 : 0.5;
        s.object = g.sensor_object(cfg.max_methods, cfg.max_program_depth);
        int queued = (i == 0 ? 1 : 0) + rng.below(2);
        for (int k = 0; k < queued; ++k)
            s.queue.push_back(g.program({}, g.any_type(), cfg.max_program_depth));
        n.sensors.push_back(std::move(s));
    }

    auto errors = check_network(iface, n);
    if (!errors.empty())
        throw GenerationExhausted("generated network for seed " + std::to_string(cfg.seed) +
                                  " does not type-check: " + errors.front().what());
    return n;
}

} // namespace csn
