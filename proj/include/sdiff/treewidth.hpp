#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdiff/network.hpp"

namespace sdiff {

/// Tree of bags over the network's nodes, rooted at `root`.
/// Children of a bag are ordered by their position in `edges`.
struct TreeDecomposition {
    std::vector<std::vector<NodeId>> bags;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t root = 0;

    /// max |bag| - 1, or -1 for an empty decomposition.
    int width() const noexcept;

    friend bool operator==(const TreeDecomposition&, const TreeDecomposition&) = default;
};

struct DecompositionReport {
    std::vector<std::string> violations;
    int width = -1;

    bool valid() const noexcept { return violations.empty(); }
};

/// Checks node coverage, edge coverage, connectivity of every node's bags,
/// and that the bag graph is a tree containing the root.
DecompositionReport validate_decomposition(const InfluenceNetwork& net, const TreeDecomposition& td);

/// Valid (not necessarily optimal) decomposition from a min-fill elimination
/// ordering; ties go to the lower degree, then the smaller id. Rooted at the
/// bag of the last eliminated node.
TreeDecomposition min_fill_decomposition(const InfluenceNetwork& net);

/// Parent/children view of a decomposition.
struct RootedTree {
    std::vector<std::size_t> parent;                 // npos for the root
    std::vector<std::vector<std::size_t>> children;  // in edge-list order
    std::vector<std::size_t> top_down;               // BFS order from the root

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

RootedTree root_tree(const TreeDecomposition& td);

enum class DiffusionMode { Full, Partial };

/// Full mode: the two orderings activate their common nodes in the same order.
bool compatible(std::span<const NodeId> a, std::span<const NodeId> b);

/// Partial mode: `a` orders a subset of `ground_a`, `b` a subset of
/// `ground_b`. Additionally neither may activate a node of the other's ground
/// set that the other leaves inactive.
bool compatible(std::span<const NodeId> a, std::span<const NodeId> ground_a, std::span<const NodeId> b,
                std::span<const NodeId> ground_b);

/// Bag plus the neighbours of its members, sorted.
std::vector<NodeId> closed_bag(const InfluenceNetwork& net, std::span<const NodeId> bag);

/// The admissible orderings of one bag's closed bag, in lexicographic order.
struct AdmissibleSet {
    std::vector<NodeId> ground;
    std::vector<ActivationSequence> orderings;
};

struct TreewidthOptions {
    /// Largest closed bag the enumeration accepts (factorial growth).
    std::size_t max_closed_bag = 9;
};

/// Largest closed bag the solvers can handle at all.
inline constexpr std::size_t kMaxClosedBagLimit = 15;

/// All orderings of the closed bag of `bag` (full: permutations, partial:
/// ordered subsequences) that put the seed first when the bag holds it, give
/// every bag member other than the seed an earlier neighbour, and have a
/// compatible ordering in every child set.
AdmissibleSet enumerate_admissible(const DiffusionInstance& instance, std::span<const NodeId> bag,
                                   std::span<const AdmissibleSet> children, DiffusionMode mode,
                                   const TreewidthOptions& options = {});

/// Per-bag dynamic-programming tables, exposed for inspection.
struct BagTable {
    std::vector<NodeId> bag;     // sorted
    std::vector<NodeId> ground;  // closed bag, sorted; orderings index into it
    std::size_t ordering_length_stride = 0;
    /// Admissible orderings, flattened: ordering r occupies
    /// cells[r*stride .. r*stride + lengths[r]) as indices into `ground`.
    std::vector<std::uint8_t> cells;
    std::vector<std::uint8_t> lengths;
    /// Step time of bag[b] under ordering r at step_times[r*bag.size() + b];
    /// +inf when the ordering leaves it inactive.
    std::vector<double> step_times;
    /// Full: best[r]. Partial: best[r*(z+1) + k] for k = 0..z.
    std::vector<double> best;

    std::size_t ordering_count() const noexcept { return lengths.size(); }
    ActivationSequence ordering(std::size_t r) const;
};

struct TreewidthTables {
    DiffusionMode mode = DiffusionMode::Full;
    RootedTree tree;
    std::vector<BagTable> bags;
    double optimum = kInfinity;
};

/// Bottom-up pass over a validated decomposition.
TreewidthTables build_tables(const DiffusionInstance& instance, const TreeDecomposition& td, DiffusionMode mode,
                             const TreewidthOptions& options = {});

/// Optimal full diffusion (z = n) over a tree decomposition.
SolveResult tw_full_optimal(const DiffusionInstance& instance, const TreeDecomposition& td,
                            const TreewidthOptions& options = {});

/// Optimal activation of z nodes over a tree decomposition.
SolveResult tw_partial_optimal(const DiffusionInstance& instance, const TreeDecomposition& td,
                               const TreewidthOptions& options = {});

}  // namespace sdiff
