#pragma once

// Run traces and their JSON-lines form:
//
//   {"step":3,"rule":"broadcast-deliver","sensor":"sink","detail":{"receiver":"s1","call":"loc.ping()"}}
//   {"step":9,"sensor":"sink","builtin":"log_mac","value":"m1"}

#include "csn/engine.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace csn {

enum class Outcome { Quiescent, BudgetExhausted, RuntimeError };

std::string_view to_string(Outcome o);

struct Trace {
    std::vector<TraceEvent> events;
    Outcome outcome = Outcome::Quiescent;
    std::uint64_t steps = 0;
    std::string error;
};

/// One event as a single line of JSON, without the newline.
std::string to_json_line(const TraceEvent& e);

void write_json_lines(std::ostream& out, const Trace& t);

/// Numbers stay numbers, symbols become strings, unit is null and any
/// other value is {"term": printed form}.
std::string value_json(const Value& v);

} // namespace csn
