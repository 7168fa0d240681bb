#include "csn/world.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace csn {

double distance(Position a, Position b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

double grid_sample(const GridField& g, Position p)
{
    const auto rows = g.rows.size();
    const auto cols = g.rows.front().size();
    auto clamp_index = [](double u, std::size_t n) {
        return std::clamp(u, 0.0, static_cast<double>(n - 1));
    };
    double u = clamp_index((p.x - g.origin.x) / g.cell, cols);
    double v = clamp_index((p.y - g.origin.y) / g.cell, rows);
    auto c0 = static_cast<std::size_t>(std::floor(u));
    auto r0 = static_cast<std::size_t>(std::floor(v));
    auto c1 = std::min(c0 + 1, cols - 1);
    auto r1 = std::min(r0 + 1, rows - 1);
    double fu = u - static_cast<double>(c0);
    double fv = v - static_cast<double>(r0);
    double bottom = g.rows[r0][c0] * (1 - fu) + g.rows[r0][c1] * fu;
    double top = g.rows[r1][c0] * (1 - fu) + g.rows[r1][c1] * fu;
    return bottom * (1 - fv) + top * fv;
}

} // namespace

double sample_field(const FieldModel& field, Position p)
{
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, ConstantField>) {
                return f.value;
            } else if constexpr (std::is_same_v<F, GaussianField>) {
                double d = distance(p, f.center);
                return f.peak * std::exp(-(d * d) / (2 * f.sigma * f.sigma));
            } else {
                return grid_sample(f, p);
            }
        },
        field);
}

GridField load_grid_csv(const std::filesystem::path& path, Position origin, double cell)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open grid file " + path.string());
    GridField g{{}, origin, cell};
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::vector<double> row;
        std::stringstream cells(line);
        std::string item;
        while (std::getline(cells, item, ',')) {
            auto first = item.find_first_not_of(" \t\r");
            auto last = item.find_last_not_of(" \t\r");
            if (first == std::string::npos)
                throw Error("empty cell in grid file " + path.string());
            double d = 0;
            auto [ptr, ec] = std::from_chars(item.data() + first, item.data() + last + 1, d);
            if (ec != std::errc() || ptr != item.data() + last + 1)
                throw Error("bad number '" + item + "' in grid file " + path.string());
            row.push_back(d);
        }
        if (!g.rows.empty() && row.size() != g.rows.front().size())
            throw Error("ragged grid file " + path.string());
        g.rows.push_back(std::move(row));
    }
    if (g.rows.empty() || g.rows.front().empty())
        throw Error("grid file " + path.string() + " has no samples");
    if (!(cell > 0))
        throw Error("grid cell size must be positive");
    return g;
}

const std::vector<LogEntry>& LogStore::entries(const std::string& sensor) const
{
    static const std::vector<LogEntry> none;
    auto it = logs_.find(sensor);
    return it == logs_.end() ? none : it->second;
}

std::size_t LogStore::size() const
{
    std::size_t n = 0;
    for (const auto& [sensor, entries] : logs_)
        n += entries.size();
    return n;
}

BuiltinTable BuiltinTable::standard()
{
    BuiltinTable t;
    t.add("field", Builtin{MethodType{{}, Type::builtin()},
                           [](std::span<const Value>, BuiltinContext& ctx) -> Value {
                               return number(sample_field(ctx.world.field, ctx.position));
                           }});
    t.add_logger("log_mac");
    t.add_logger("log_field");
    return t;
}

void BuiltinTable::add_logger(std::string name)
{
    add(name, Builtin{MethodType{{Type::builtin()}, Type::empty_object()},
                      [name](std::span<const Value> args, BuiltinContext& ctx) -> Value {
                          ctx.logs.append(ctx.sensor, LogEntry{ctx.step, name, args.front()});
                          return empty_object();
                      }});
}

const Builtin* BuiltinTable::find(const Label& l) const
{
    auto it = table_.find(l);
    return it == table_.end() ? nullptr : &it->second;
}

Value call_builtin(const Label& name, std::span<const Value> args, BuiltinContext& ctx)
{
    const Builtin* b = ctx.world.builtins ? ctx.world.builtins->find(name) : nullptr;
    if (!b)
        throw UnknownBuiltin("unknown built-in '" + name.name + "'");
    if (args.size() != b->signature.params.size())
        throw BuiltinArityMismatch("built-in '" + name.name + "' expects " +
                                   std::to_string(b->signature.params.size()) + " argument(s), got " +
                                   std::to_string(args.size()));
    return b->invoke(args, ctx);
}

} // namespace csn
