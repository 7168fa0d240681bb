#pragma once

// Type syntax: B, Net, plain object types {l: (T...) -> T} and sensor
// object types [l: (T...) -> T]. Type variables only appear transiently
// inside the checker while parameter types are being inferred.

#include "csn/syntax.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace csn {

enum class ObjectKind { Plain, Sensor };

struct MethodType;
using MethodTypes = std::map<Label, MethodType>;

class Type {
public:
    enum class Tag { Builtin, Net, Object, Var };

    static Type builtin() { return Type(Tag::Builtin); }
    static Type net() { return Type(Tag::Net); }
    static Type object(ObjectKind kind, MethodTypes methods);
    static Type empty_object() { return object(ObjectKind::Plain, {}); }
    static Type variable(std::uint32_t id);

    Tag tag() const { return tag_; }
    bool is_object() const { return tag_ == Tag::Object; }
    bool is_var() const { return tag_ == Tag::Var; }
    ObjectKind kind() const { return kind_; }
    const MethodTypes& methods() const;
    const MethodType* find(const Label& l) const;
    std::uint32_t var_id() const { return var_; }

    friend bool operator==(const Type& a, const Type& b);

private:
    explicit Type(Tag tag) : tag_(tag) {}

    Tag tag_;
    ObjectKind kind_ = ObjectKind::Plain;
    std::shared_ptr<const MethodTypes> methods_;
    std::uint32_t var_ = 0;
};

struct MethodType {
    std::vector<Type> params;
    Type result;
    friend bool operator==(const MethodType&, const MethodType&) = default;
};

/// The network-wide type of `loc`. Always a sensor object type.
struct GlobalInterface {
    Type type = Type::object(ObjectKind::Sensor, {});

    GlobalInterface() = default;
    explicit GlobalInterface(MethodTypes methods) : type(Type::object(ObjectKind::Sensor, std::move(methods))) {}

    const MethodTypes& methods() const { return type.methods(); }
    const MethodType* find(const Label& l) const { return type.find(l); }
};

std::string to_string(const Type& t);
std::string to_string(const MethodType& m);

} // namespace csn
