#pragma once

#include <cstdint>

#include "sdiff/network.hpp"

namespace sdiff {

/// How a heuristic picks among equally scored candidates.
struct TieBreak {
    enum class Kind { SmallestId, Random };

    Kind kind = Kind::SmallestId;
    std::uint64_t seed = 0;

    static TieBreak smallest_id() { return {}; }
    static TieBreak random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

/// Repeatedly activates the inactive node with the highest activation
/// probability. Nodes with probability 0 are never chosen; if none remains
/// before z nodes are active the result is infeasible.
SolveResult greedy_sequence(const DiffusionInstance& instance, TieBreak tie_break = {});

/// Repeatedly activates the node with the most active neighbours (a plain
/// count), among nodes with positive activation probability.
SolveResult majority_sequence(const DiffusionInstance& instance, TieBreak tie_break = {});

/// Explore-then-exploit sequence on G(k): k a-nodes, then every b-node, then
/// the remaining a-nodes. Throws ValidationError unless `instance` is G(k).
SolveResult strategy_a(const DiffusionInstance& instance);

/// strategy_a on make_gk(k); total is 3k^2 - 2k.
SolveResult strategy_a_gk(int k);

/// H_k = 1 + 1/2 + ... + 1/k.
double harmonic(int k);

}  // namespace sdiff
