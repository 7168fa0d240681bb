#pragma once

// The physical environment a network runs in: geometry, the sampled scalar
// field, energy constants and the table of built-in sensor methods.

#include "csn/syntax.hpp"
#include "csn/type.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace csn {

struct Position {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Position&, const Position&) = default;
};

/// Euclidean distance in the plane.
double distance(Position a, Position b);

struct ConstantField {
    double value = 0.0;
};

struct GaussianField {
    Position center;
    double peak = 1.0;
    double sigma = 1.0;
};

/// Samples on a regular grid. rows[r][c] sits at origin + (c, r) * cell, so
/// row 0 is the smallest y. Reads between samples interpolate bilinearly;
/// reads outside the grid clamp to the border.
struct GridField {
    std::vector<std::vector<double>> rows;
    Position origin;
    double cell = 1.0;
};

using FieldModel = std::variant<ConstantField, GaussianField, GridField>;

double sample_field(const FieldModel& field, Position p);

/// Reads a grid from CSV: one row of comma-separated floats per line.
GridField load_grid_csv(const std::filesystem::path& path, Position origin, double cell);

struct LogEntry {
    std::uint64_t step = 0;
    std::string builtin;
    Value value;
};

/// Per-sensor, append-only record of logging built-ins.
class LogStore {
public:
    void append(const std::string& sensor, LogEntry entry) { logs_[sensor].push_back(std::move(entry)); }
    const std::vector<LogEntry>& entries(const std::string& sensor) const;
    const std::map<std::string, std::vector<LogEntry>>& all() const { return logs_; }
    std::size_t size() const;

private:
    std::map<std::string, std::vector<LogEntry>> logs_;
};

struct WorldConfig;

struct BuiltinContext {
    const std::string& sensor;
    Position position;
    const WorldConfig& world;
    LogStore& logs;
    std::uint64_t step;
};

struct Builtin {
    MethodType signature;
    std::function<Value(std::span<const Value>, BuiltinContext&)> invoke;
};

class UnknownBuiltin : public Error {
public:
    using Error::Error;
};

class BuiltinArityMismatch : public Error {
public:
    using Error::Error;
};

/// Built-in methods reachable through `loc` when the sensor's own object
/// does not define the label.
class BuiltinTable {
public:
    /// field: () -> B, log_mac: (B) -> {}, log_field: (B) -> {}.
    static BuiltinTable standard();

    void add(std::string name, Builtin b) { table_.insert_or_assign(Label{std::move(name)}, std::move(b)); }

    /// Adds a built-in of type (B) -> {} that appends its argument to the log.
    void add_logger(std::string name);

    const Builtin* find(const Label& l) const;
    const std::map<Label, Builtin>& entries() const { return table_; }

private:
    std::map<Label, Builtin> table_;
};

struct WorldConfig {
    double e_in = 0.0;
    double e_out = 0.0;
    FieldModel field = ConstantField{0.0};
    bool metering = false;
    std::shared_ptr<const BuiltinTable> builtins = std::make_shared<const BuiltinTable>(BuiltinTable::standard());
};

Value call_builtin(const Label& name, std::span<const Value> args, BuiltinContext& ctx);

} // namespace csn
