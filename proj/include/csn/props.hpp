#pragma once

// Random well-typed networks and the subject-reduction suite built on them.

#include "csn/explore.hpp"
#include "csn/network.hpp"
#include "csn/type.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace csn {

struct GenConfig {
    std::uint64_t seed = 0;
    int max_sensors = 3;
    int max_methods = 4;
    int max_program_depth = 3;
    // With no methods of its own, each network gets a fresh interface
    // from default_generated_interface(seed).
    GlobalInterface interface;
};

class GenerationExhausted : public Error {
public:
    using Error::Error;
};

/// Three to six methods whose parameters and results are B or {}, plus the
/// standard built-ins.
GlobalInterface default_generated_interface(std::uint64_t seed);

/// The interface a generated network is typed against.
GlobalInterface generation_interface(const GenConfig& cfg);

/// Type-directed: every program is built to a chosen type, so the result
/// passes check_network. Pure function of cfg.
Network gen_well_typed_network(const GenConfig& cfg);

struct SuiteOptions {
    int instances = 200;
    std::size_t depth = 4;
    std::size_t max_states = 50000;
    unsigned jobs = 1;
    bool shrink = true;
    EngineOptions engine;
};

struct SuiteFailure {
    std::uint64_t seed = 0;
    GlobalInterface interface;
    Network network;  // shrunk when SuiteOptions::shrink is set
    Counterexample counterexample;
};

struct SuiteReport {
    int instances = 0;
    int passed = 0;
    int skipped = 0;  // state budget exceeded
    std::size_t states = 0;
    std::vector<SuiteFailure> failures;
};

/// Instance i uses seed cfg.seed + i. Failures are listed in seed order.
SuiteReport subject_reduction_suite(const GenConfig& cfg, const SuiteOptions& opts);

/// Greedily drops sensors, queued programs and methods while the network
/// still type-checks and still has a counterexample.
Network shrink_counterexample(const Network& n, const GlobalInterface& iface, const ExploreOptions& opts);

/// The network as a `.csn` source text.
std::string to_source(const Network& n, const GlobalInterface& iface);

} // namespace csn
