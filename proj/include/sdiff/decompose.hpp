#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "sdiff/network.hpp"

namespace sdiff {

struct BiconnectedComponents {
    /// Node sets of the blocks, each sorted, listed in lexicographic order.
    std::vector<std::vector<NodeId>> components;
    /// Articulation points, sorted.
    std::vector<NodeId> cut_nodes;
};

/// Blocks and articulation points; a cut node is listed in every block it
/// belongs to. A single node forms one block. Throws ValidationError on a
/// disconnected network.
BiconnectedComponents biconnected_components(const InfluenceNetwork& net);

/// One block as a standalone instance. Local ids follow ascending global
/// ids; the seed is the block's entry node.
struct ComponentInstance {
    DiffusionInstance instance;
    std::vector<NodeId> to_global;
    NodeId entry = 0;  // global id
};

/// Splits a full-diffusion instance into its blocks, in breadth-first
/// order of the block-cut tree from the seed. Influence a node receives from
/// outside its block is folded into its external influence, so local and
/// global w_i agree. Throws UnsupportedError unless z = n.
std::vector<ComponentInstance> component_instances(const DiffusionInstance& instance);

using InnerSolver = std::function<SolveResult(const DiffusionInstance&)>;

/// Solves every block with `inner` and concatenates the block sequences
/// (entries dropped) in block order. The returned result is the merged
/// sequence priced on the whole instance.
SolveResult solve_full_via_decomposition(const DiffusionInstance& instance, const InnerSolver& inner);

}  // namespace sdiff
