#pragma once

// Concrete-syntax printer. Output re-parses to an alpha-equivalent term.

#include "csn/syntax.hpp"

#include <string>

namespace csn {

struct PrintOptions {
    // Rename binders produced by fresh_variable to parseable names, and
    // print unused generated lets as `P; Q`.
    bool readable = true;
};

std::string pretty_print(const Program& p, PrintOptions opts = {});
std::string pretty_print(const Value& v, PrintOptions opts = {});
std::string pretty_print(const Object& o, PrintOptions opts = {});

/// Shortest decimal text that reads back as the same double.
std::string format_number(double d);

/// Double-quoted literal with \" \\ \n escapes.
std::string quote_symbol(const std::string& s);

} // namespace csn
