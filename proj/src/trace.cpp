#include "csn/trace.hpp"

#include "csn/printer.hpp"

#include "json.hpp"

#include <ostream>

namespace csn {

namespace {

using json = nlohmann::ordered_json;

json to_json(const Value& v)
{
    if (auto b = std::get_if<BuiltinValue>(&v)) {
        if (auto n = std::get_if<Number>(b))
            return n->value;
        if (auto s = std::get_if<Symbol>(b))
            return s->text;
        return nullptr;
    }
    return json{{"term", pretty_print(v)}};
}

} // namespace

std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::Quiescent:
        return "quiescent";
    case Outcome::BudgetExhausted:
        return "budget-exhausted";
    case Outcome::RuntimeError:
        return "runtime-error";
    }
    return "?";
}

std::string value_json(const Value& v)
{
    return to_json(v).dump();
}

std::string to_json_line(const TraceEvent& e)
{
    json j;
    if (auto s = std::get_if<StepEvent>(&e)) {
        j["step"] = s->step;
        j["rule"] = rule_name(s->rule);
        j["sensor"] = s->sensor;
        json detail = json::object();
        for (const auto& [k, v] : s->detail)
            detail[k] = v;
        j["detail"] = std::move(detail);
    } else {
        const auto& l = std::get<LogEvent>(e);
        j["step"] = l.step;
        j["sensor"] = l.sensor;
        j["builtin"] = l.builtin;
        j["value"] = to_json(l.value);
    }
    return j.dump();
}

void write_json_lines(std::ostream& out, const Trace& t)
{
    for (const auto& e : t.events)
        out << to_json_line(e) << '\n';
}

} // namespace csn
