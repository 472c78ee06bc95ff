#pragma once

// Reference engine with separate old and new populations (2*popsize genome
// buffers during breeding). Single-threaded; children are created in index
// order. Shares selection, per-child streams, crossover and fitness with the
// pooled engine, so both produce the same populations for the same config.

#include "mmgp/engine.hpp"

namespace mmgp {

/// config.nthreads is ignored.
RunResult run_evolution_naive(const RunConfig& config, const Problem& problem);
RunResult run_evolution_naive(const RunConfig& config);

}  // namespace mmgp
