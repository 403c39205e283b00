#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sdiff/errors.hpp"
#include "sdiff/node_set.hpp"

namespace sdiff {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// One undirected edge {u, v} with both directional influences.
/// `w_uv` is the influence of u on v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double w_uv = 1.0;
    double w_vu = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Adjacency entry stored on the owning node: `in` is the neighbour's
/// influence on the owner, `out` the owner's influence on the neighbour.
struct Arc {
    NodeId node;
    double in;
    double out;
};

/// Undirected topology with asymmetric influence weights.
///
/// Immutable after construction. Total incoming influence
/// w_i = external_i + sum_j w_ji is cached per node. The constructor only
/// rejects node ids it cannot index; everything else (negative weights,
/// self-loops, duplicate pairs) is reported by validate().
class InfluenceNetwork {
public:
    InfluenceNetwork() = default;
    explicit InfluenceNetwork(std::size_t n, std::vector<Edge> edges = {}, std::vector<double> external = {});

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const Arc> neighbors(NodeId i) const { return adjacency_.at(i); }
    std::size_t degree(NodeId i) const { return adjacency_.at(i).size(); }
    std::size_t max_degree() const noexcept;

    bool has_edge(NodeId a, NodeId b) const;
    /// Influence of `from` on `to`; 0 for non-adjacent pairs.
    double influence(NodeId from, NodeId to) const;
    double total_influence(NodeId i) const { return total_.at(i); }
    double external_influence(NodeId i) const { return external_.at(i); }
    std::span<const double> external() const noexcept { return external_; }

    /// Every invariant breach, each naming the node or edge involved.
    std::vector<std::string> validate() const;

    friend bool operator==(const InfluenceNetwork& a, const InfluenceNetwork& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_ && a.external_ == b.external_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> external_;
    std::vector<double> total_;
    std::vector<std::vector<Arc>> adjacency_;
};

/// A network, a seed, the number of nodes to activate and the model exponents.
struct DiffusionInstance {
    InfluenceNetwork network;
    NodeId seed = 0;
    std::size_t z = 1;
    double alpha = 1.0;
    double beta = 1.0;

    std::size_t size() const noexcept { return network.size(); }
    bool full() const noexcept { return z == network.size(); }
    std::vector<std::string> validate() const;
    /// Throws ValidationError carrying the first violation.
    void require_valid() const;
};

/// Ordered, repetition-free node list; as a solution it starts at the seed.
using ActivationSequence = std::vector<NodeId>;

struct SolveResult {
    ActivationSequence sequence;
    double total_time = 0.0;
    /// Aligned with `sequence`; the seed contributes 0.
    std::vector<double> step_times;

    bool feasible() const noexcept { return std::isfinite(total_time); }

    /// No z-node sequence with finite time exists: seed-only sequence, +inf total.
    static SolveResult infeasible(NodeId seed) { return {{seed}, kInfinity, {0.0}}; }
};

namespace detail {

// Every solver prices a step through these two functions so that the same
// sequence yields bit-identical totals regardless of which solver built it.

inline double probability(double active_influence, double total, double alpha, double beta) {
    if (!(active_influence > 0.0) || !(total > 0.0)) return 0.0;
    double fraction = active_influence / total;
    if (fraction > 1.0) fraction = 1.0;
    return alpha == 1.0 ? beta * fraction : beta * std::pow(fraction, alpha);
}

inline double step_time(double active_influence, double total, double alpha, double beta) {
    if (!(active_influence > 0.0) || !(total > 0.0)) return kInfinity;
    if (alpha == 1.0) {
        double t = total / (beta * active_influence);
        return t < 1.0 / beta ? 1.0 / beta : t;
    }
    return 1.0 / probability(active_influence, total, alpha, beta);
}

}  // namespace detail

/// Sum of w_ji over neighbours j of i that are in `active`.
double active_influence(const InfluenceNetwork& net, const NodeSet& active, NodeId i);

/// beta * (active influence / w_i)^alpha, with 0^alpha = 0 for every alpha.
/// Throws DomainError when w_i = 0 and ValidationError when i is already active.
double activation_probability(const InfluenceNetwork& net, const NodeSet& active, NodeId i,
                              double alpha = 1.0, double beta = 1.0);

/// 1 / activation_probability, +inf when no active influence reaches i.
double expected_step_time(const InfluenceNetwork& net, const NodeSet& active, NodeId i,
                          double alpha = 1.0, double beta = 1.0);

/// Throws ValidationError unless `seq` is nonempty, starts at the seed, stays
/// in range and has no repeats. Length is not checked.
void check_sequence(const DiffusionInstance& instance, std::span<const NodeId> seq);

/// Prices `seq` step by step with the active set growing prefix by prefix.
/// A step with no active influence costs +inf (including nodes with w_i = 0).
SolveResult sequence_time(const DiffusionInstance& instance, std::span<const NodeId> seq);

}  // namespace sdiff
