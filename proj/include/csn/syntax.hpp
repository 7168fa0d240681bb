#pragma once

// Abstract syntax of sensor-network programs: values, objects, programs.
//
// Every term is immutable once built. Programs share structure through
// shared_ptr<const ...>, so copying a Program is cheap and trees can be
// handed across threads freely.

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace csn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Method name. Labels and variables live in disjoint namespaces.
struct Label {
    std::string name;
    friend auto operator<=>(const Label&, const Label&) = default;
};

struct Variable {
    std::string name;
    friend auto operator<=>(const Variable&, const Variable&) = default;
};

struct Number {
    double value = 0.0;
    friend bool operator==(const Number&, const Number&) = default;
};

/// Opaque symbolic constant, e.g. a MAC address.
struct Symbol {
    std::string text;
    friend bool operator==(const Symbol&, const Symbol&) = default;
};

struct Unit {
    friend bool operator==(const Unit&, const Unit&) = default;
};

using BuiltinValue = std::variant<Number, Symbol, Unit>;

struct ProgramNode;

/// Handle to an immutable program tree.
class Program {
public:
    explicit Program(std::shared_ptr<const ProgramNode> node);

    const ProgramNode& node() const { return *node_; }
    const ProgramNode* get() const { return node_.get(); }

    template <class Kind>
    const Kind* as() const;

    friend bool operator==(const Program& a, const Program& b);

private:
    std::shared_ptr<const ProgramNode> node_;
};

struct Method {
    std::vector<Variable> params;
    Program body;
    friend bool operator==(const Method&, const Method&) = default;
};

/// An object is its method table; labels are unique by construction.
struct Object {
    std::map<Label, Method> methods;

    const Method* find(const Label& l) const
    {
        auto it = methods.find(l);
        return it == methods.end() ? nullptr : &it->second;
    }
    friend bool operator==(const Object&, const Object&) = default;
};

/// The broadcast address `net`.
struct NetValue {
    friend bool operator==(const NetValue&, const NetValue&) = default;
};

/// The sensor's own object `loc`.
struct LocValue {
    friend bool operator==(const LocValue&, const LocValue&) = default;
};

using Value = std::variant<BuiltinValue, Variable, NetValue, LocValue, Object>;

struct Val {
    Value value;
    friend bool operator==(const Val&, const Val&) = default;
};

struct Call {
    Value target;
    Label method;
    std::vector<Value> args;
    friend bool operator==(const Call&, const Call&) = default;
};

struct Install {
    Value target;
    Value addition;
    friend bool operator==(const Install&, const Install&) = default;
};

struct Let {
    Variable binder;
    Program bound;
    Program body;
    friend bool operator==(const Let&, const Let&) = default;
};

struct ProgramNode {
    std::variant<Val, Call, Install, Let> kind;
};

template <class Kind>
const Kind* Program::as() const
{
    return std::get_if<Kind>(&node_->kind);
}

// Construction helpers.
Program make_value(Value v);
Program make_call(Value target, Label method, std::vector<Value> args);
Program make_install(Value target, Value addition);
Program make_let(Variable binder, Program bound, Program body);

inline Value number(double d) { return BuiltinValue{Number{d}}; }
inline Value symbol(std::string s) { return BuiltinValue{Symbol{std::move(s)}}; }
inline Value unit() { return BuiltinValue{Unit{}}; }
inline Value var(std::string name) { return Variable{std::move(name)}; }
inline Value net() { return NetValue{}; }
inline Value loc() { return LocValue{}; }
inline Value empty_object() { return Object{}; }

inline const Object* as_object(const Value& v) { return std::get_if<Object>(&v); }

// Words that can never name a variable.
bool is_reserved_word(std::string_view word);

/// Returns a variable that cannot clash with any user-written name
/// (its spelling contains '#', which the lexer rejects).
Variable fresh_variable(std::string_view base);

/// True for names produced by fresh_variable.
bool is_generated_name(std::string_view name);

std::set<Variable> free_vars(const Program& p);
std::set<Variable> free_vars(const Value& v);
std::set<Variable> free_vars(const Object& o);

bool is_closed(const Value& v);

/// Simultaneous substitution. Bound occurrences are untouched; a binder that
/// would capture a free variable of a substituted value is renamed first.
using Substitution = std::map<Variable, Value>;

Program substitute(const Program& p, const Substitution& s);
Value substitute(const Value& v, const Substitution& s);
Object substitute(const Object& o, const Substitution& s);

/// O + O' = (O \ O') U O'.
Object object_update(const Object& base, const Object& addition);

bool alpha_equal(const Program& a, const Program& b);
bool alpha_equal(const Value& a, const Value& b);
bool alpha_equal(const Object& a, const Object& b);

/// Renames every binder to a position-determined generated name, so that
/// alpha-equivalent terms become structurally equal.
Program alpha_normalize(const Program& p);
Object alpha_normalize(const Object& o);

} // namespace csn
