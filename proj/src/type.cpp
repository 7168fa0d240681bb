#include "csn/type.hpp"

namespace csn {

Type Type::object(ObjectKind kind, MethodTypes methods)
{
    Type t(Tag::Object);
    t.kind_ = kind;
    t.methods_ = std::make_shared<const MethodTypes>(std::move(methods));
    return t;
}

Type Type::variable(std::uint32_t id)
{
    Type t(Tag::Var);
    t.var_ = id;
    return t;
}

const MethodTypes& Type::methods() const
{
    static const MethodTypes none;
    return methods_ ? *methods_ : none;
}

const MethodType* Type::find(const Label& l) const
{
    const auto& ms = methods();
    auto it = ms.find(l);
    return it == ms.end() ? nullptr : &it->second;
}

bool operator==(const Type& a, const Type& b)
{
    if (a.tag_ != b.tag_)
        return false;
    switch (a.tag_) {
    case Type::Tag::Builtin:
    case Type::Tag::Net:
        return true;
    case Type::Tag::Var:
        return a.var_ == b.var_;
    case Type::Tag::Object:
        return a.kind_ == b.kind_ && (a.methods_ == b.methods_ || a.methods() == b.methods());
    }
    return false;
}

std::string to_string(const MethodType& m)
{
    std::string out = "(";
    for (std::size_t i = 0; i < m.params.size(); ++i) {
        if (i)
            out += ", ";
        out += to_string(m.params[i]);
    }
    return out + ") -> " + to_string(m.result);
}

std::string to_string(const Type& t)
{
    switch (t.tag()) {
    case Type::Tag::Builtin:
        return "B";
    case Type::Tag::Net:
        return "Net";
    case Type::Tag::Var:
        return "?" + std::to_string(t.var_id());
    case Type::Tag::Object:
        break;
    }
    bool sensor = t.kind() == ObjectKind::Sensor;
    std::string out = sensor ? "[" : "{";
    bool first = true;
    for (const auto& [label, m] : t.methods()) {
        if (!first)
            out += ", ";
        first = false;
        out += label.name + ": " + to_string(m);
    }
    return out + (sensor ? "]" : "}");
}

} // namespace csn
