#pragma once

#include <cstddef>

#include "sdiff/network.hpp"

namespace sdiff {

struct BruteForceOptions {
    std::size_t max_nodes = 10;
    bool force = false;
};

/// Exhaustive search over every repetition-free sequence of length z that
/// starts at the seed. Among equal totals the lexicographically smallest
/// sequence wins. Refuses n > max_nodes unless forced (GuardError).
SolveResult brute_force_optimal(const DiffusionInstance& instance, const BruteForceOptions& options = {});

/// Subset encodings are 64-bit words, so the DP never exceeds this.
inline constexpr std::size_t kDpHardNodeLimit = 64;

struct DpOptions {
    std::size_t max_nodes = 28;
};

/// Layered subset dynamic program:
///   best({seed}) = 0,
///   best(C) = min over i in C of best(C \ {i}) + step time of i given C \ {i}.
/// Layer k holds every finite-time set of size k; only two layers of times
/// are alive at once, while a predecessor per set is kept for reconstruction.
///
/// Ties: among sets of size z with equal time the smallest encoding wins;
/// within a set, the lexicographically smallest optimal sequence is kept.
/// Returns SolveResult::infeasible when no size-z set has finite time.
SolveResult dp_optimal(const DiffusionInstance& instance, const DpOptions& options = {});

}  // namespace sdiff
