#include "csn/printer.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

namespace csn {

std::string format_number(double d)
{
    if (std::isnan(d))
        return "nan";
    if (std::isinf(d))
        return d > 0 ? "inf" : "-inf";
    if (d == 0)
        return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, ptr);
}

std::string quote_symbol(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        default:
            out += c;
        }
    }
    return out + "\"";
}

namespace {

void collect_names(const Program& p, std::set<std::string>& out);

void collect_names(const Value& v, std::set<std::string>& out)
{
    if (auto x = std::get_if<Variable>(&v)) {
        out.insert(x->name);
    } else if (auto o = std::get_if<Object>(&v)) {
        for (const auto& [label, m] : o->methods) {
            for (const auto& param : m.params)
                out.insert(param.name);
            collect_names(m.body, out);
        }
    }
}

void collect_names(const Program& p, std::set<std::string>& out)
{
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Val>) {
                collect_names(k.value, out);
            } else if constexpr (std::is_same_v<K, Call>) {
                collect_names(k.target, out);
                for (const auto& a : k.args)
                    collect_names(a, out);
            } else if constexpr (std::is_same_v<K, Install>) {
                collect_names(k.target, out);
                collect_names(k.addition, out);
            } else {
                out.insert(k.binder.name);
                collect_names(k.bound, out);
                collect_names(k.body, out);
            }
        },
        p.node().kind);
}

class Printer {
public:
    explicit Printer(PrintOptions opts) : opts_(opts) {}

    void prepare(const Program& p) { collect_names(p, used_); }
    void prepare(const Value& v) { collect_names(v, used_); }

    void program(const Program& p)
    {
        std::visit(
            [&](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Val>) {
                    value(k.value);
                } else if constexpr (std::is_same_v<K, Call>) {
                    value(k.target);
                    out_ += '.';
                    out_ += k.method.name;
                    args(k.args);
                } else if constexpr (std::is_same_v<K, Install>) {
                    out_ += "install ";
                    value(k.target);
                    out_ += ' ';
                    value(k.addition);
                } else {
                    let(k);
                }
            },
            p.node().kind);
    }

    void value(const Value& v)
    {
        std::visit(
            [&](const auto& x) {
                using X = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<X, BuiltinValue>) {
                    builtin(x);
                } else if constexpr (std::is_same_v<X, Variable>) {
                    out_ += lookup(x);
                } else if constexpr (std::is_same_v<X, NetValue>) {
                    out_ += "net";
                } else if constexpr (std::is_same_v<X, LocValue>) {
                    out_ += "loc";
                } else {
                    object(x);
                }
            },
            v);
    }

    void object(const Object& o)
    {
        if (o.methods.empty()) {
            out_ += "{}";
            return;
        }
        out_ += "{ ";
        bool first = true;
        for (const auto& [label, m] : o.methods) {
            if (!first)
                out_ += ", ";
            first = false;
            out_ += label.name;
            out_ += " = (";
            auto depth = scope_.size();
            for (std::size_t i = 0; i < m.params.size(); ++i) {
                if (i)
                    out_ += ", ";
                out_ += bind(m.params[i]);
            }
            out_ += ") ";
            program(m.body);
            scope_.resize(depth);
        }
        out_ += " }";
    }

    std::string take() { return std::move(out_); }

private:
    void builtin(const BuiltinValue& b)
    {
        if (auto n = std::get_if<Number>(&b))
            out_ += format_number(n->value);
        else if (auto s = std::get_if<Symbol>(&b))
            out_ += quote_symbol(s->text);
        else
            out_ += "()";
    }

    void args(const std::vector<Value>& vs)
    {
        out_ += '(';
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i)
                out_ += ", ";
            value(vs[i]);
        }
        out_ += ')';
    }

    void let(const Let& k)
    {
        bool sequence = opts_.readable && is_generated_name(k.binder.name) && !free_vars(k.body).contains(k.binder);
        if (sequence) {
            bool wrap = k.bound.as<Let>() != nullptr;
            if (wrap)
                out_ += '(';
            program(k.bound);
            if (wrap)
                out_ += ')';
            out_ += "; ";
            scope_.emplace_back(k.binder, k.binder.name);
            program(k.body);
            scope_.pop_back();
            return;
        }
        out_ += "let ";
        auto depth = scope_.size();
        std::string name = bind(k.binder);
        // The binder is not in scope inside its own bound program.
        auto entry = scope_.back();
        scope_.pop_back();
        out_ += name;
        out_ += " = ";
        program(k.bound);
        out_ += " in ";
        scope_.push_back(std::move(entry));
        program(k.body);
        scope_.resize(depth);
    }

    std::string bind(const Variable& x)
    {
        std::string name = x.name;
        if (opts_.readable && is_generated_name(name)) {
            std::string base = name.substr(0, name.find('#'));
            if (base.empty())
                base = "x";
            for (int k = 1;; ++k) {
                std::string candidate = base + "_" + std::to_string(k);
                if (!used_.contains(candidate) && !is_reserved_word(candidate)) {
                    name = candidate;
                    break;
                }
            }
            used_.insert(name);
        }
        scope_.emplace_back(x, name);
        return name;
    }

    std::string lookup(const Variable& x) const
    {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (it->first == x)
                return it->second;
        return x.name;
    }

    PrintOptions opts_;
    std::string out_;
    std::set<std::string> used_;
    std::vector<std::pair<Variable, std::string>> scope_;
};

} // namespace

std::string pretty_print(const Program& p, PrintOptions opts)
{
    Printer printer(opts);
    printer.prepare(p);
    printer.program(p);
    return printer.take();
}

std::string pretty_print(const Value& v, PrintOptions opts)
{
    Printer printer(opts);
    printer.prepare(v);
    printer.value(v);
    return printer.take();
}

std::string pretty_print(const Object& o, PrintOptions opts)
{
    return pretty_print(Value{o}, opts);
}

} // namespace csn
