#pragma once

// Textual `.csn` front end.
//
//   interface { ping: () -> {}, forward: (B) -> {}, log_mac: (B) -> {} }
//   world { e_in = 1; e_out = 5; field = gaussian(0, 0, 25, 3); }
//   MSensor(m) = { ping = () net.forward(m); net.ping()
//                  forward = (x) net.forward(x) }
//   MSink = { forward = (x) log_mac(x) }
//   sensor sink at (0, 0) radius 1.5 energy 100 object MSink run net.ping()
//   sensor s1 at (1, 0) radius 1.5 energy 100 object MSensor("m1")
//
// Sugar: `P; Q` is `let x# = P in Q` with x# fresh, `install E` is
// `install loc E`, and a bare call `f(v...)` is `loc.f(v...)`.

#include "csn/network.hpp"
#include "csn/syntax.hpp"
#include "csn/type.hpp"
#include "csn/world.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace csn {

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& message);

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct TemplateDef {
    std::string name;
    std::vector<Variable> params;
    Object body;
};

struct GridFile {
    std::string path;
    Position origin;
    double cell = 1.0;
};

using FieldDecl = std::variant<ConstantField, GaussianField, GridFile>;

struct WorldDecl {
    double e_in = 0.0;
    double e_out = 0.0;
    FieldDecl field = ConstantField{0.0};
};

struct NodeDecl {
    std::string name;
    bool offline = false;
    Position position;
    double radius = 0.0;
    double energy = 0.0;
    Object object;
    // Set when the object came from a template; kept for printing.
    std::optional<std::string> template_name;
    std::vector<Value> template_args;
    std::vector<Program> queue;
};

struct SourceUnit {
    GlobalInterface interface;
    WorldDecl world;
    std::vector<TemplateDef> templates;
    std::vector<NodeDecl> nodes;
};

SourceUnit parse_network(std::string_view text);
Program parse_program(std::string_view text);
Type parse_type(std::string_view text);

std::string pretty_print(const SourceUnit& unit);

/// Loads grid files relative to base_dir.
WorldConfig make_world(const WorldDecl& decl, const std::filesystem::path& base_dir, bool metering = false);

Network make_network(const SourceUnit& unit, std::shared_ptr<const WorldConfig> world);

/// Inverse of make_network for networks with no run-time state.
SourceUnit to_source_unit(const Network& n, const GlobalInterface& iface);

} // namespace csn
