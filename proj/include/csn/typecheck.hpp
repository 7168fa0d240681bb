#pragma once

// Type checking of values, programs, sensors and networks.
//
// Method parameters carry no annotations, so the checker infers them:
// every parameter starts as a type variable, and calls or installs whose
// operand types are not yet known are deferred until unification resolves
// them. A closed object literal that conforms to the global interface may
// also be typed at the sensor object type; the checker picks the plain
// reading first and falls back to the sensor reading only when needed.

#include "csn/network.hpp"
#include "csn/type.hpp"
#include "csn/world.hpp"

#include <map>
#include <string>
#include <vector>

namespace csn {

enum class TypeErrorCode {
    UnboundVariable,
    NoSuchMethod,
    ArityMismatch,
    ArgumentTypeMismatch,
    TargetNotObject,
    TargetNotNetOrObject,
    IllegalInstallCombination,
    InstallBreaksInterface,
    TypeMismatch,
    MethodNotInInterface,
    SignatureMismatch,
    InterfaceBuiltinMismatch,
};

std::string_view to_string(TypeErrorCode code);

class TypeError : public Error {
public:
    TypeError(TypeErrorCode code, std::string message, std::string sensor = {}, std::string location = {});

    TypeErrorCode code() const { return code_; }
    const std::string& sensor() const { return sensor_; }
    const std::string& location() const { return location_; }
    const std::string& detail() const { return detail_; }

    TypeError with_site(std::string sensor, std::string location) const;

private:
    TypeErrorCode code_;
    std::string detail_;
    std::string sensor_;
    std::string location_;
};

using TypingEnv = std::map<Variable, Type>;

Type type_of_value(const TypingEnv& env, const GlobalInterface& iface, const Value& v);
Type type_of_program(const TypingEnv& env, const GlobalInterface& iface, const Program& p);

/// T1 (+) T2: right-biased method union, kind of T1. Defined for
/// sensor (+) sensor, sensor (+) plain and plain (+) plain only.
Type type_combine(const Type& t1, const Type& t2);

/// Throws the first TypeError found in the sensor.
void check_sensor(const GlobalInterface& iface, const Sensor& s);

/// Every error in the network, in sensor order.
std::vector<TypeError> check_network(const GlobalInterface& iface, const Network& n);

/// Built-ins named in the interface must be declared with their own
/// signature.
std::vector<TypeError> validate_interface(const GlobalInterface& iface, const BuiltinTable& builtins);

} // namespace csn
