#include "csn/syntax.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <utility>

namespace csn {

Program::Program(std::shared_ptr<const ProgramNode> node) : node_(std::move(node)) {}

bool operator==(const Program& a, const Program& b)
{
    if (a.node_ == b.node_)
        return true;
    return a.node_->kind == b.node_->kind;
}

Program make_value(Value v)
{
    return Program(std::make_shared<const ProgramNode>(ProgramNode{Val{std::move(v)}}));
}

Program make_call(Value target, Label method, std::vector<Value> args)
{
    return Program(std::make_shared<const ProgramNode>(
        ProgramNode{Call{std::move(target), std::move(method), std::move(args)}}));
}

Program make_install(Value target, Value addition)
{
    return Program(std::make_shared<const ProgramNode>(
        ProgramNode{Install{std::move(target), std::move(addition)}}));
}

Program make_let(Variable binder, Program bound, Program body)
{
    return Program(std::make_shared<const ProgramNode>(
        ProgramNode{Let{std::move(binder), std::move(bound), std::move(body)}}));
}

bool is_reserved_word(std::string_view word)
{
    static constexpr std::array<std::string_view, 9> reserved = {
        "net", "loc", "install", "let", "in", "off", "sensor", "world", "interface"};
    return std::find(reserved.begin(), reserved.end(), word) != reserved.end();
}

namespace {
std::atomic<std::uint64_t> fresh_counter{0};
}

Variable fresh_variable(std::string_view base)
{
    auto hash = base.find('#');
    if (hash != std::string_view::npos)
        base = base.substr(0, hash);
    if (base.empty())
        base = "x";
    return Variable{std::string(base) + "#" + std::to_string(fresh_counter.fetch_add(1) + 1)};
}

bool is_generated_name(std::string_view name)
{
    return name.find('#') != std::string_view::npos;
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void collect_free(const Program& p, std::set<Variable>& bound, std::set<Variable>& out);

void collect_free(const Value& v, std::set<Variable>& bound, std::set<Variable>& out)
{
    if (auto x = std::get_if<Variable>(&v)) {
        if (!bound.contains(*x))
            out.insert(*x);
    } else if (auto o = std::get_if<Object>(&v)) {
        for (const auto& [label, m] : o->methods) {
            std::vector<Variable> added;
            for (const auto& param : m.params)
                if (bound.insert(param).second)
                    added.push_back(param);
            collect_free(m.body, bound, out);
            for (const auto& param : added)
                bound.erase(param);
        }
    }
}

void collect_free(const Program& p, std::set<Variable>& bound, std::set<Variable>& out)
{
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Val>) {
                collect_free(k.value, bound, out);
            } else if constexpr (std::is_same_v<K, Call>) {
                collect_free(k.target, bound, out);
                for (const auto& a : k.args)
                    collect_free(a, bound, out);
            } else if constexpr (std::is_same_v<K, Install>) {
                collect_free(k.target, bound, out);
                collect_free(k.addition, bound, out);
            } else {
                collect_free(k.bound, bound, out);
                bool added = bound.insert(k.binder).second;
                collect_free(k.body, bound, out);
                if (added)
                    bound.erase(k.binder);
            }
        },
        p.node().kind);
}

} // namespace

std::set<Variable> free_vars(const Program& p)
{
    std::set<Variable> bound, out;
    collect_free(p, bound, out);
    return out;
}

std::set<Variable> free_vars(const Value& v)
{
    std::set<Variable> bound, out;
    collect_free(v, bound, out);
    return out;
}

std::set<Variable> free_vars(const Object& o)
{
    return free_vars(Value{o});
}

bool is_closed(const Value& v)
{
    if (std::holds_alternative<Variable>(v))
        return false;
    if (std::holds_alternative<Object>(v))
        return free_vars(v).empty();
    return true;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

struct Substituter {
    // Free variables of the substituted values; a binder in this set must be
    // renamed before descending under it.
    std::set<Variable> danger;

    Program program(const Program& p, const Substitution& s) const
    {
        if (s.empty())
            return p;
        return std::visit(
            [&](const auto& k) -> Program {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Val>) {
                    return make_value(value(k.value, s));
                } else if constexpr (std::is_same_v<K, Call>) {
                    std::vector<Value> args;
                    args.reserve(k.args.size());
                    for (const auto& a : k.args)
                        args.push_back(value(a, s));
                    return make_call(value(k.target, s), k.method, std::move(args));
                } else if constexpr (std::is_same_v<K, Install>) {
                    return make_install(value(k.target, s), value(k.addition, s));
                } else {
                    Program bound = program(k.bound, s);
                    Substitution inner = s;
                    inner.erase(k.binder);
                    if (inner.empty())
                        return make_let(k.binder, std::move(bound), k.body);
                    Variable binder = k.binder;
                    if (danger.contains(binder)) {
                        binder = fresh_variable(k.binder.name);
                        inner.emplace(k.binder, Value{binder});
                    }
                    return make_let(std::move(binder), std::move(bound), program(k.body, inner));
                }
            },
            p.node().kind);
    }

    Value value(const Value& v, const Substitution& s) const
    {
        if (auto x = std::get_if<Variable>(&v)) {
            auto it = s.find(*x);
            return it == s.end() ? v : it->second;
        }
        if (auto o = std::get_if<Object>(&v))
            return object(*o, s);
        return v;
    }

    Object object(const Object& o, const Substitution& s) const
    {
        Object out;
        for (const auto& [label, m] : o.methods) {
            Substitution inner = s;
            for (const auto& param : m.params)
                inner.erase(param);
            if (inner.empty()) {
                out.methods.emplace(label, m);
                continue;
            }
            Method renamed{m.params, m.body};
            for (auto& param : renamed.params) {
                if (danger.contains(param)) {
                    Variable fresh = fresh_variable(param.name);
                    inner.emplace(param, Value{fresh});
                    param = fresh;
                }
            }
            renamed.body = program(m.body, inner);
            out.methods.emplace(label, std::move(renamed));
        }
        return out;
    }
};

Substituter make_substituter(const Substitution& s)
{
    Substituter sub;
    for (const auto& [x, v] : s) {
        if (is_closed(v))
            continue;
        auto fv = free_vars(v);
        sub.danger.insert(fv.begin(), fv.end());
    }
    return sub;
}

} // namespace

Program substitute(const Program& p, const Substitution& s)
{
    return make_substituter(s).program(p, s);
}

Value substitute(const Value& v, const Substitution& s)
{
    return make_substituter(s).value(v, s);
}

Object substitute(const Object& o, const Substitution& s)
{
    return make_substituter(s).object(o, s);
}

Object object_update(const Object& base, const Object& addition)
{
    Object out = base;
    for (const auto& [label, m] : addition.methods)
        out.methods.insert_or_assign(label, m);
    return out;
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

struct AlphaEq {
    std::vector<std::pair<Variable, Variable>> scope;

    bool var(const Variable& a, const Variable& b) const
    {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
            bool left = it->first == a;
            bool right = it->second == b;
            if (left || right)
                return left && right;
        }
        return a == b;
    }

    bool value(const Value& a, const Value& b)
    {
        if (a.index() != b.index())
            return false;
        if (auto x = std::get_if<Variable>(&a))
            return var(*x, std::get<Variable>(b));
        if (auto o = std::get_if<Object>(&a))
            return object(*o, std::get<Object>(b));
        return a == b;
    }

    bool object(const Object& a, const Object& b)
    {
        if (a.methods.size() != b.methods.size())
            return false;
        for (auto ia = a.methods.begin(), ib = b.methods.begin(); ia != a.methods.end(); ++ia, ++ib) {
            if (ia->first != ib->first || ia->second.params.size() != ib->second.params.size())
                return false;
            auto depth = scope.size();
            for (std::size_t i = 0; i < ia->second.params.size(); ++i)
                scope.emplace_back(ia->second.params[i], ib->second.params[i]);
            bool ok = program(ia->second.body, ib->second.body);
            scope.resize(depth);
            if (!ok)
                return false;
        }
        return true;
    }

    bool program(const Program& a, const Program& b)
    {
        if (a.get() == b.get() && scope.empty())
            return true;
        const auto& ka = a.node().kind;
        const auto& kb = b.node().kind;
        if (ka.index() != kb.index())
            return false;
        if (auto x = std::get_if<Val>(&ka))
            return value(x->value, std::get<Val>(kb).value);
        if (auto x = std::get_if<Call>(&ka)) {
            const auto& y = std::get<Call>(kb);
            if (x->method != y.method || x->args.size() != y.args.size() || !value(x->target, y.target))
                return false;
            for (std::size_t i = 0; i < x->args.size(); ++i)
                if (!value(x->args[i], y.args[i]))
                    return false;
            return true;
        }
        if (auto x = std::get_if<Install>(&ka)) {
            const auto& y = std::get<Install>(kb);
            return value(x->target, y.target) && value(x->addition, y.addition);
        }
        const auto& x = std::get<Let>(ka);
        const auto& y = std::get<Let>(kb);
        if (!program(x.bound, y.bound))
            return false;
        scope.emplace_back(x.binder, y.binder);
        bool ok = program(x.body, y.body);
        scope.pop_back();
        return ok;
    }
};

struct Normalizer {
    std::size_t next = 0;
    std::vector<std::pair<Variable, Variable>> scope;

    Variable bind(const Variable& x)
    {
        Variable fresh{"#" + std::to_string(next++)};
        scope.emplace_back(x, fresh);
        return fresh;
    }

    Variable lookup(const Variable& x) const
    {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == x)
                return it->second;
        return x;
    }

    Value value(const Value& v)
    {
        if (auto x = std::get_if<Variable>(&v))
            return lookup(*x);
        if (auto o = std::get_if<Object>(&v))
            return object(*o);
        return v;
    }

    Object object(const Object& o)
    {
        Object out;
        for (const auto& [label, m] : o.methods) {
            auto depth = scope.size();
            std::vector<Variable> params;
            for (const auto& param : m.params)
                params.push_back(bind(param));
            out.methods.emplace(label, Method{std::move(params), program(m.body)});
            scope.resize(depth);
        }
        return out;
    }

    Program program(const Program& p)
    {
        return std::visit(
            [&](const auto& k) -> Program {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Val>) {
                    return make_value(value(k.value));
                } else if constexpr (std::is_same_v<K, Call>) {
                    std::vector<Value> args;
                    for (const auto& a : k.args)
                        args.push_back(value(a));
                    return make_call(value(k.target), k.method, std::move(args));
                } else if constexpr (std::is_same_v<K, Install>) {
                    return make_install(value(k.target), value(k.addition));
                } else {
                    Program bound = program(k.bound);
                    Variable binder = bind(k.binder);
                    Program body = program(k.body);
                    scope.pop_back();
                    return make_let(std::move(binder), std::move(bound), std::move(body));
                }
            },
            p.node().kind);
    }
};

} // namespace

bool alpha_equal(const Program& a, const Program& b)
{
    return AlphaEq{}.program(a, b);
}

bool alpha_equal(const Value& a, const Value& b)
{
    return AlphaEq{}.value(a, b);
}

bool alpha_equal(const Object& a, const Object& b)
{
    return AlphaEq{}.object(a, b);
}

Program alpha_normalize(const Program& p)
{
    return Normalizer{}.program(p);
}

Object alpha_normalize(const Object& o)
{
    return Normalizer{}.object(o);
}

} // namespace csn
