#include "sdiff/heuristics.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "sdiff/generators.hpp"
#include "sdiff/random.hpp"

namespace sdiff {

namespace {

// Shared driver: `score` returns nullopt for nodes that may not be chosen.
template <typename Score>
SolveResult run_heuristic(const DiffusionInstance& instance, TieBreak tie_break, Score score) {
    instance.require_valid();
    const InfluenceNetwork& net = instance.network;
    Rng rng(tie_break.seed);
    NodeSet active(net.size());
    active.insert(instance.seed);
    ActivationSequence seq{instance.seed};
    std::vector<NodeId> tied;
    while (seq.size() < instance.z) {
        tied.clear();
        double best = -1.0;
        for (NodeId v = 0; v < net.size(); ++v) {
            if (active.contains(v)) continue;
            std::optional<double> s = score(active, v);
            if (!s) continue;
            if (*s > best) {
                best = *s;
                tied.clear();
            }
            if (*s == best) tied.push_back(v);
        }
        if (tied.empty()) return SolveResult::infeasible(instance.seed);
        NodeId pick = tied.front();
        if (tie_break.kind == TieBreak::Kind::Random && tied.size() > 1) pick = tied[rng.below(tied.size())];
        seq.push_back(pick);
        active.insert(pick);
    }
    return sequence_time(instance, seq);
}

}  // namespace

SolveResult greedy_sequence(const DiffusionInstance& instance, TieBreak tie_break) {
    const InfluenceNetwork& net = instance.network;
    return run_heuristic(instance, tie_break, [&](const NodeSet& active, NodeId v) -> std::optional<double> {
        const double p = detail::probability(active_influence(net, active, v), net.total_influence(v),
                                             instance.alpha, instance.beta);
        if (!(p > 0.0)) return std::nullopt;
        return p;
    });
}

SolveResult majority_sequence(const DiffusionInstance& instance, TieBreak tie_break) {
    const InfluenceNetwork& net = instance.network;
    return run_heuristic(instance, tie_break, [&](const NodeSet& active, NodeId v) -> std::optional<double> {
        const double p = detail::probability(active_influence(net, active, v), net.total_influence(v),
                                             instance.alpha, instance.beta);
        if (!(p > 0.0)) return std::nullopt;
        double count = 0.0;
        for (const Arc& a : net.neighbors(v)) {
            if (active.contains(a.node)) count += 1.0;
        }
        return count;
    });
}

SolveResult strategy_a(const DiffusionInstance& instance) {
    const std::size_t n = instance.size();
    int k = 1;
    while (static_cast<std::size_t>(k * k + k) < n) ++k;
    if (static_cast<std::size_t>(k * k + k) != n) {
        throw ValidationError("strategy A needs a G(k) network; n=" + std::to_string(n) + " is not k^2+k");
    }
    const DiffusionInstance gk = make_gk(k);
    if (!(instance.network == gk.network) || instance.seed != gk.seed || instance.z != gk.z) {
        throw ValidationError("strategy A needs a G(k) network; instance differs from G(" + std::to_string(k) + ")");
    }
    const auto kk = static_cast<NodeId>(k);
    ActivationSequence seq{0};
    for (NodeId i = 1; i <= kk; ++i) seq.push_back(i);
    for (NodeId j = 1; j < kk; ++j) seq.push_back(kk * kk + j);
    for (NodeId i = kk + 1; i <= kk * kk; ++i) seq.push_back(i);
    return sequence_time(instance, seq);
}

SolveResult strategy_a_gk(int k) { return strategy_a(make_gk(k)); }

double harmonic(int k) {
    double h = 0.0;
    for (int i = 1; i <= k; ++i) h += 1.0 / i;
    return h;
}

}  // namespace sdiff
