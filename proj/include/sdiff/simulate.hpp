#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "sdiff/network.hpp"

namespace sdiff {

struct SimulationOptions {
    std::size_t trials = 100000;
    std::uint64_t rng_seed = 0;
    /// Trials are split into this many contiguous chunks, each with its own
    /// derived stream; results depend on (rng_seed, workers).
    std::size_t workers = 1;
};

struct SimulationSummary {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
    double min = 0.0;
    double max = 0.0;
    double analytic = 0.0;  // sequence_time of the simulated sequence
};

/// Attempts until success for probability p, by inverse transform of a
/// uniform in (0, 1]. Always at least 1; exactly 1 when p = 1.
std::uint64_t geometric_attempts(double p, double u);

/// Samples the total number of attempts needed to activate `seq` in order,
/// one attempt per time step. Throws ValidationError if `seq` is not a valid
/// sequence with finite expected time, or trials is 0.
SimulationSummary simulate_sequence(const DiffusionInstance& instance, std::span<const NodeId> seq,
                                    const SimulationOptions& options = {});

}  // namespace sdiff
