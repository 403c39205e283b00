#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdiff/network.hpp"

namespace sdiff {

/// Universe {0, ..., universe-1} and a list of subsets of it.
struct SetCoverInstance {
    std::size_t universe = 0;
    std::vector<std::vector<std::size_t>> sets;
    std::optional<std::size_t> k;

    std::vector<std::string> validate() const;
};

/// Minimum cover size by subset enumeration; nullopt when U is uncoverable.
/// Refuses more than 20 sets.
std::optional<std::size_t> brute_force_set_cover(const SetCoverInstance& sc);

/// G(k): seed 0, a-nodes 1..k^2, b-nodes k^2+1..k^2+k-1. Seed-a and
/// every a-b pair are joined, all weights 1, z = n.
DiffusionInstance make_gk(int k);

/// Node layout shared by the two set-cover gadgets: seed 0, then S-nodes,
/// q-nodes, q'-nodes, then the element blocks.
struct GadgetLayout {
    std::size_t set_count = 0;
    std::size_t universe = 0;
    std::size_t copies = 1;  // element copies per universe member

    NodeId seed() const noexcept { return 0; }
    NodeId set_node(std::size_t i) const noexcept { return static_cast<NodeId>(1 + i); }
    NodeId q_node(std::size_t i) const noexcept { return static_cast<NodeId>(1 + set_count + i); }
    NodeId q_prime_node(std::size_t i) const noexcept { return static_cast<NodeId>(1 + 2 * set_count + i); }
    NodeId element_node(std::size_t u, std::size_t copy = 0) const noexcept {
        return static_cast<NodeId>(1 + 3 * set_count + u * copies + copy);
    }
    std::size_t node_count() const noexcept { return 1 + 3 * set_count + universe * copies; }
};

struct HardnessOptions {
    /// Replace each q->S influence |U||S| by unit-weight 2-paths
    /// (intermediate nodes appended after the element block).
    bool binary_weights = false;
};

struct HardnessInstance {
    DiffusionInstance instance;
    double threshold = 0.0;  // k(|U||S| + 1) + |U||S|
    GadgetLayout layout;
};

/// Set-cover reduction gadget: a cover of size <= k exists iff the optimal
/// time to activate z = k + |U| + 1 nodes is at most `threshold`.
HardnessInstance make_np_hardness(const SetCoverInstance& sc, std::size_t k, HardnessOptions options = {});

struct InapproxInstance {
    DiffusionInstance instance;
    SetCoverInstance cover;
    double lambda = 1.0;
    double set_cost = 0.0;  // z |S|^(lambda+1): expected time of every S-node
    GadgetLayout layout;
};

/// Gadget with |S|+1 copies per universe element, q->S influence set_cost-1
/// and z = |U|(|S|+1) + 1.
InapproxInstance make_inapprox(const SetCoverInstance& sc, double lambda = 1.0);

/// Indices of the sets whose S-nodes appear in `seq`. Throws
/// ValidationError unless `seq` is a finite-time solution activating z nodes.
std::vector<std::size_t> extract_cover(const InapproxInstance& gadget, std::span<const NodeId> seq);

struct BinarizedNetwork {
    InfluenceNetwork network;
    double offset = 0.0;  // sum over edges of (w_ij + w_ji)
};

/// Replaces every direction i->j of integer weight c > 0 by c intermediate
/// nodes k with w_ik = w_kj = 1 and zero reverse weights. New nodes are
/// numbered from n upward in edge order, u->v before v->u.
/// Throws ValidationError on non-integer or negative weights.
BinarizedNetwork binarize_weights(const InfluenceNetwork& net);

struct WeightRange {
    double lo = 1.0;
    double hi = 1.0;
    bool integral = false;  // draw integers uniformly from [lo, hi]
};

/// Random spanning tree plus each remaining pair with probability edge_prob;
/// per-direction weights drawn independently. Deterministic per rng_seed.
InfluenceNetwork random_connected(std::size_t n, double edge_prob, WeightRange weights, std::uint64_t rng_seed);

/// Random tree with every degree at most max_degree.
InfluenceNetwork random_tree(std::size_t n, std::size_t max_degree, WeightRange weights, std::uint64_t rng_seed);

/// Connected graph of treewidth at most 2 and degree at most max_degree,
/// grown by attaching nodes to one node or to both ends of an edge.
InfluenceNetwork random_partial_two_tree(std::size_t n, std::size_t max_degree, WeightRange weights,
                                         std::uint64_t rng_seed);

}  // namespace sdiff
