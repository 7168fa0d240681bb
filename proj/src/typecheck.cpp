#include "csn/typecheck.hpp"

#include "csn/printer.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <variant>

namespace csn {

std::string_view to_string(TypeErrorCode code)
{
    switch (code) {
    case TypeErrorCode::UnboundVariable:
        return "UnboundVariable";
    case TypeErrorCode::NoSuchMethod:
        return "NoSuchMethod";
    case TypeErrorCode::ArityMismatch:
        return "ArityMismatch";
    case TypeErrorCode::ArgumentTypeMismatch:
        return "ArgumentTypeMismatch";
    case TypeErrorCode::TargetNotObject:
        return "TargetNotObject";
    case TypeErrorCode::TargetNotNetOrObject:
        return "TargetNotNetOrObject";
    case TypeErrorCode::IllegalInstallCombination:
        return "IllegalInstallCombination";
    case TypeErrorCode::InstallBreaksInterface:
        return "InstallBreaksInterface";
    case TypeErrorCode::TypeMismatch:
        return "TypeMismatch";
    case TypeErrorCode::MethodNotInInterface:
        return "MethodNotInInterface";
    case TypeErrorCode::SignatureMismatch:
        return "SignatureMismatch";
    case TypeErrorCode::InterfaceBuiltinMismatch:
        return "InterfaceBuiltinMismatch";
    }
    return "?";
}

namespace {

std::string render(TypeErrorCode code, const std::string& detail, const std::string& sensor,
                   const std::string& location)
{
    std::string out(to_string(code));
    out += ": " + detail;
    if (!sensor.empty() || !location.empty()) {
        out += " [";
        out += sensor.empty() ? location : (location.empty() ? sensor : sensor + ", " + location);
        out += "]";
    }
    return out;
}

} // namespace

TypeError::TypeError(TypeErrorCode code, std::string message, std::string sensor, std::string location)
    : Error(render(code, message, sensor, location)), code_(code), detail_(std::move(message)),
      sensor_(std::move(sensor)), location_(std::move(location))
{
}

TypeError TypeError::with_site(std::string sensor, std::string location) const
{
    return TypeError(code_, detail_, std::move(sensor), std::move(location));
}

Type type_combine(const Type& t1, const Type& t2)
{
    if (!t1.is_object() || !t2.is_object())
        throw TypeError(TypeErrorCode::TargetNotObject,
                        "install needs two objects, got " + to_string(t1) + " and " + to_string(t2));
    if (t1.kind() == ObjectKind::Plain && t2.kind() == ObjectKind::Sensor)
        throw TypeError(TypeErrorCode::IllegalInstallCombination,
                        "cannot install a sensor object into an anonymous object: " + to_string(t1) + " (+) " +
                            to_string(t2));
    MethodTypes methods = t1.methods();
    for (const auto& [label, m] : t2.methods())
        methods.insert_or_assign(label, m);
    return Type::object(t1.kind(), std::move(methods));
}

namespace {

struct HasMethod {
    Type target;
    Label label;
    std::vector<Type> args;
    Type result;
    Program site;
};

struct Combine {
    Type target;
    Type addition;
    Type result;
    Program site;
};

// A closed literal that conforms to the interface: its type is either the
// plain type or the interface itself.
struct LiteralChoice {
    Type var;
    Type plain;
};

using Constraint = std::variant<HasMethod, Combine, LiteralChoice>;

class Checker {
public:
    explicit Checker(const GlobalInterface& iface) : iface_(iface) {}

    Type value(const TypingEnv& env, const Value& v)
    {
        return std::visit(
            [&](const auto& x) -> Type {
                using X = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<X, BuiltinValue>) {
                    return Type::builtin();
                } else if constexpr (std::is_same_v<X, Variable>) {
                    auto it = env.find(x);
                    if (it == env.end())
                        throw TypeError(TypeErrorCode::UnboundVariable, "unbound variable '" + x.name + "'");
                    return it->second;
                } else if constexpr (std::is_same_v<X, NetValue>) {
                    return Type::net();
                } else if constexpr (std::is_same_v<X, LocValue>) {
                    return iface_.type;
                } else {
                    return literal(env, x);
                }
            },
            v);
    }

    Type program(const TypingEnv& env, const Program& p)
    {
        if (auto val = p.as<Val>())
            return value(env, val->value);
        if (auto call = p.as<Call>()) {
            std::vector<Type> args;
            args.reserve(call->args.size());
            for (const auto& a : call->args)
                args.push_back(value(env, a));
            Type target = Type::net();
            if (auto o = as_object(call->target))
                target = literal_target(env, *o, call->method, p);
            else
                target = value(env, call->target);
            Type result = fresh();
            pending_.emplace_back(HasMethod{target, call->method, std::move(args), result, p});
            solve();
            return result;
        }
        if (auto inst = p.as<Install>()) {
            Type target = value(env, inst->target);
            Type addition = value(env, inst->addition);
            Type result = fresh();
            pending_.emplace_back(Combine{target, addition, result, p});
            solve();
            return result;
        }
        const auto& let = *p.as<Let>();
        Type bound = program(env, let.bound);
        TypingEnv inner = env;
        inner.insert_or_assign(let.binder, bound);
        return program(inner, let.body);
    }

    /// Resolves pending constraints, then settles literal readings,
    /// preferring the plain one.
    void finish()
    {
        solve();
        for (;;) {
            auto it = std::find_if(pending_.begin(), pending_.end(), [&](const Constraint& c) {
                auto choice = std::get_if<LiteralChoice>(&c);
                return choice && resolve(choice->var).is_var();
            });
            if (it == pending_.end())
                return;
            LiteralChoice choice = std::get<LiteralChoice>(*it);
            auto saved_bindings = bindings_;
            auto saved_pending = pending_;
            auto saved_objects = objects_only_;
            try {
                bind(choice.var, choice.plain);
                solve();
            } catch (const TypeError& first) {
                bindings_ = std::move(saved_bindings);
                pending_ = std::move(saved_pending);
                objects_only_ = std::move(saved_objects);
                try {
                    bind(choice.var, iface_.type);
                    solve();
                } catch (const TypeError&) {
                    throw first;
                }
            }
        }
    }

    void expect(const Type& actual, const Type& expected, TypeErrorCode code, const std::string& what)
    {
        if (!unify(actual, expected))
            throw TypeError(code, what + ": expected " + to_string(zonk(expected)) + ", found " +
                                      to_string(zonk(actual)));
    }

    Type zonk(const Type& t) const
    {
        Type r = resolve(t);
        if (!r.is_object())
            return r;
        MethodTypes methods;
        for (const auto& [label, m] : r.methods()) {
            MethodType z{{}, zonk(m.result)};
            for (const auto& param : m.params)
                z.params.push_back(zonk(param));
            methods.emplace(label, std::move(z));
        }
        return Type::object(r.kind(), std::move(methods));
    }

private:
    Type fresh()
    {
        bindings_.emplace_back();
        return Type::variable(static_cast<std::uint32_t>(bindings_.size() - 1));
    }

    Type resolve(Type t) const
    {
        while (t.is_var() && bindings_[t.var_id()])
            t = *bindings_[t.var_id()];
        return t;
    }

    void bind(const Type& var, const Type& t) { bindings_[resolve(var).var_id()] = t; }

    bool occurs(std::uint32_t id, const Type& t) const
    {
        Type r = resolve(t);
        if (r.is_var())
            return r.var_id() == id;
        if (!r.is_object())
            return false;
        for (const auto& [label, m] : r.methods()) {
            if (occurs(id, m.result))
                return true;
            for (const auto& param : m.params)
                if (occurs(id, param))
                    return true;
        }
        return false;
    }

    bool unify(const Type& a0, const Type& b0)
    {
        Type a = resolve(a0);
        Type b = resolve(b0);
        if (a.is_var() && b.is_var() && a.var_id() == b.var_id())
            return true;
        if (a.is_var()) {
            if (occurs(a.var_id(), b))
                return false;
            if (objects_only_.count(a.var_id())) {
                if (b.is_var())
                    objects_only_.insert(b.var_id());
                else if (!b.is_object())
                    return false;
            }
            bindings_[a.var_id()] = b;
            return true;
        }
        if (b.is_var())
            return unify(b, a);
        if (a.tag() != b.tag())
            return false;
        if (!a.is_object())
            return true;
        if (a.kind() != b.kind() || a.methods().size() != b.methods().size())
            return false;
        for (auto ia = a.methods().begin(), ib = b.methods().begin(); ia != a.methods().end(); ++ia, ++ib) {
            if (ia->first != ib->first || ia->second.params.size() != ib->second.params.size())
                return false;
            for (std::size_t i = 0; i < ia->second.params.size(); ++i)
                if (!unify(ia->second.params[i], ib->second.params[i]))
                    return false;
            if (!unify(ia->second.result, ib->second.result))
                return false;
        }
        return true;
    }

    Type plain_literal(const TypingEnv& env, const Object& o)
    {
        MethodTypes methods;
        for (const auto& [label, m] : o.methods) {
            TypingEnv inner = env;
            MethodType sig{{}, Type::builtin()};
            for (const auto& param : m.params) {
                Type t = fresh();
                sig.params.push_back(t);
                inner.insert_or_assign(param, t);
            }
            sig.result = program(inner, m.body);
            methods.emplace(label, std::move(sig));
        }
        return Type::object(ObjectKind::Plain, std::move(methods));
    }

    // Whether a closed literal can stand in for the sensor object: every
    // method is in the interface and checks against its declared signature.
    bool conforms(const Object& o) const
    {
        for (const auto& [label, m] : o.methods) {
            const MethodType* sig = iface_.find(label);
            if (!sig || sig->params.size() != m.params.size())
                return false;
        }
        try {
            for (const auto& [label, m] : o.methods) {
                const MethodType& sig = *iface_.find(label);
                Checker sub(iface_);
                TypingEnv env;
                for (std::size_t i = 0; i < m.params.size(); ++i)
                    env.insert_or_assign(m.params[i], sig.params[i]);
                Type body = sub.program(env, m.body);
                if (!sub.unify(body, sig.result))
                    return false;
                sub.finish();
            }
        } catch (const TypeError&) {
            return false;
        }
        return true;
    }

    Type literal(const TypingEnv& env, const Object& o)
    {
        Type plain = plain_literal(env, o);
        if (!free_vars(o).empty() || !conforms(o))
            return plain;
        Type v = fresh();
        objects_only_.insert(v.var_id());
        pending_.emplace_back(LiteralChoice{v, plain});
        return v;
    }

    Type literal_target(const TypingEnv& env, const Object& o, const Label& method, const Program& site)
    {
        Type plain = plain_literal(env, o);
        if (plain.find(method))
            return plain;
        if (iface_.find(method) && free_vars(o).empty() && conforms(o))
            return iface_.type;
        throw TypeError(TypeErrorCode::NoSuchMethod, "no method '" + method.name + "' in " +
                                                         to_string(zonk(plain)) + " at `" + pretty_print(site) + "`");
    }

    void solve()
    {
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < pending_.size();) {
                Constraint c = pending_[i];
                if (discharge(c)) {
                    pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(i));
                    progress = true;
                } else {
                    ++i;
                }
            }
        }
    }

    bool discharge(const Constraint& c)
    {
        if (auto h = std::get_if<HasMethod>(&c))
            return discharge(*h);
        if (auto k = std::get_if<Combine>(&c))
            return discharge(*k);
        return discharge(std::get<LiteralChoice>(c));
    }

    bool discharge(const HasMethod& c)
    {
        Type target = resolve(c.target);
        if (target.is_var())
            return false;
        auto at = [&] { return " at `" + pretty_print(c.site) + "`"; };
        if (target.tag() == Type::Tag::Builtin)
            throw TypeError(TypeErrorCode::TargetNotNetOrObject, "call target has type B" + at());
        bool broadcast = target.tag() == Type::Tag::Net;
        const MethodType* sig = broadcast ? iface_.find(c.label) : target.find(c.label);
        if (!sig)
            throw TypeError(TypeErrorCode::NoSuchMethod,
                            "no method '" + c.label.name + "' in " +
                                (broadcast ? to_string(iface_.type) : to_string(zonk(target))) + at());
        if (sig->params.size() != c.args.size())
            throw TypeError(TypeErrorCode::ArityMismatch, "method '" + c.label.name + "' takes " +
                                                              std::to_string(sig->params.size()) + " argument(s), got " +
                                                              std::to_string(c.args.size()) + at());
        for (std::size_t i = 0; i < c.args.size(); ++i)
            expect(c.args[i], sig->params[i], TypeErrorCode::ArgumentTypeMismatch,
                   "argument " + std::to_string(i + 1) + " of '" + c.label.name + "'" + at());
        expect(c.result, broadcast ? Type::empty_object() : sig->result, TypeErrorCode::TypeMismatch,
               "result of '" + c.label.name + "'" + at());
        return true;
    }

    bool discharge(const Combine& c)
    {
        Type target = resolve(c.target);
        Type addition = resolve(c.addition);
        auto at = [&] { return " at `" + pretty_print(c.site) + "`"; };
        for (const Type& t : {target, addition})
            if (!t.is_var() && !t.is_object())
                throw TypeError(TypeErrorCode::TargetNotObject,
                                "install operand has type " + to_string(t) + at());
        if (target.is_var() || addition.is_var())
            return false;
        Type combined = Type::net();
        try {
            combined = type_combine(zonk(target), zonk(addition));
        } catch (const TypeError& e) {
            throw TypeError(e.code(), e.detail() + at());
        }
        if (combined.kind() == ObjectKind::Sensor && !unify(combined, iface_.type))
            throw TypeError(TypeErrorCode::InstallBreaksInterface,
                            "installing " + to_string(zonk(addition)) + " leaves the sensor object at " +
                                to_string(zonk(combined)) + ", not the interface" + at());
        expect(c.result, combined, TypeErrorCode::TypeMismatch, "install result" + at());
        return true;
    }

    bool discharge(const LiteralChoice& c)
    {
        Type t = resolve(c.var);
        if (t.is_var())
            return false;
        if (t.is_object() && t.kind() == ObjectKind::Sensor)
            expect(t, iface_.type, TypeErrorCode::TypeMismatch, "object literal");
        else
            expect(t, c.plain, TypeErrorCode::TypeMismatch, "object literal");
        return true;
    }

    const GlobalInterface& iface_;
    std::vector<std::optional<Type>> bindings_;
    std::vector<Constraint> pending_;
    // Variables standing for an object literal's type.
    std::set<std::uint32_t> objects_only_;
};

std::vector<TypeError> sensor_errors(const GlobalInterface& iface, const Sensor& s, bool first_only)
{
    std::vector<TypeError> errors;
    if (s.status == SensorStatus::Off)
        return errors;
    for (const auto& [label, m] : s.object.methods) {
        std::string where = "method " + label.name;
        const MethodType* sig = iface.find(label);
        if (!sig) {
            errors.emplace_back(TypeErrorCode::MethodNotInInterface,
                                "method '" + label.name + "' is not in the interface", s.id, where);
        } else if (sig->params.size() != m.params.size()) {
            errors.emplace_back(TypeErrorCode::SignatureMismatch,
                                "method '" + label.name + "' has " + std::to_string(m.params.size()) +
                                    " parameter(s), the interface declares " + to_string(*sig),
                                s.id, where);
        } else {
            try {
                Checker c(iface);
                TypingEnv env;
                for (std::size_t i = 0; i < m.params.size(); ++i)
                    env.insert_or_assign(m.params[i], sig->params[i]);
                Type body = c.program(env, m.body);
                c.expect(body, sig->result, TypeErrorCode::SignatureMismatch,
                         "body of '" + label.name + "' disagrees with the interface");
                c.finish();
            } catch (const TypeError& e) {
                errors.push_back(e.with_site(s.id, where));
            }
        }
        if (first_only && !errors.empty())
            return errors;
    }
    for (std::size_t i = 0; i < s.queue.size(); ++i) {
        try {
            Checker c(iface);
            c.program({}, s.queue[i]);
            c.finish();
        } catch (const TypeError& e) {
            errors.push_back(e.with_site(s.id, "queue[" + std::to_string(i) + "]"));
            if (first_only)
                return errors;
        }
    }
    return errors;
}

} // namespace

Type type_of_value(const TypingEnv& env, const GlobalInterface& iface, const Value& v)
{
    Checker c(iface);
    Type t = c.value(env, v);
    c.finish();
    return c.zonk(t);
}

Type type_of_program(const TypingEnv& env, const GlobalInterface& iface, const Program& p)
{
    Checker c(iface);
    Type t = c.program(env, p);
    c.finish();
    return c.zonk(t);
}

void check_sensor(const GlobalInterface& iface, const Sensor& s)
{
    auto errors = sensor_errors(iface, s, true);
    if (!errors.empty())
        throw errors.front();
}

std::vector<TypeError> check_network(const GlobalInterface& iface, const Network& n)
{
    std::vector<TypeError> all;
    for (const auto& s : n.sensors) {
        auto errors = sensor_errors(iface, s, false);
        all.insert(all.end(), errors.begin(), errors.end());
    }
    return all;
}

std::vector<TypeError> validate_interface(const GlobalInterface& iface, const BuiltinTable& builtins)
{
    std::vector<TypeError> errors;
    for (const auto& [label, b] : builtins.entries()) {
        const MethodType* declared = iface.find(label);
        if (declared && !(*declared == b.signature))
            errors.emplace_back(TypeErrorCode::InterfaceBuiltinMismatch,
                                "interface declares " + label.name + ": " + to_string(*declared) +
                                    " but the built-in has type " + to_string(b.signature),
                                "", "interface");
    }
    return errors;
}

} // namespace csn
