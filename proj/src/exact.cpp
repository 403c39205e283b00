#include "sdiff/exact.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sdiff {

namespace {

class ExhaustiveSearch {
public:
    explicit ExhaustiveSearch(const DiffusionInstance& instance)
        : instance_(instance), active_(instance.size()) {}

    ActivationSequence run() {
        current_.push_back(instance_.seed);
        active_.insert(instance_.seed);
        extend(0.0);
        return best_sequence_;
    }

private:
    void extend(double so_far) {
        if (current_.size() == instance_.z) {
            if (so_far < best_) {
                best_ = so_far;
                best_sequence_ = current_;
            }
            return;
        }
        const InfluenceNetwork& net = instance_.network;
        for (NodeId v = 0; v < net.size(); ++v) {
            if (active_.contains(v)) continue;
            const double t = detail::step_time(active_influence(net, active_, v), net.total_influence(v),
                                               instance_.alpha, instance_.beta);
            // An infinite step can never be part of a finite optimum.
            if (!std::isfinite(t)) continue;
            current_.push_back(v);
            active_.insert(v);
            extend(so_far + t);
            active_.erase(v);
            current_.pop_back();
        }
    }

    const DiffusionInstance& instance_;
    NodeSet active_;
    ActivationSequence current_;
    ActivationSequence best_sequence_;
    double best_ = kInfinity;
};

struct LayerEntry {
    std::uint64_t mask;
    double time;
    std::uint32_t rank;  // lexicographic rank of the stored sequence within the layer
};

struct Candidate {
    double time;
    std::uint32_t pred_rank;
    NodeId last;
};

constexpr std::uint64_t bit(NodeId v) { return std::uint64_t{1} << v; }

}  // namespace

SolveResult brute_force_optimal(const DiffusionInstance& instance, const BruteForceOptions& options) {
    instance.require_valid();
    if (instance.size() > options.max_nodes && !options.force) {
        throw GuardError("brute force refuses n=" + std::to_string(instance.size()) + " > " +
                         std::to_string(options.max_nodes) + " without force");
    }
    ActivationSequence best = ExhaustiveSearch(instance).run();
    if (best.empty()) return SolveResult::infeasible(instance.seed);
    return sequence_time(instance, best);
}

SolveResult dp_optimal(const DiffusionInstance& instance, const DpOptions& options) {
    instance.require_valid();
    const InfluenceNetwork& net = instance.network;
    const std::size_t n = net.size();
    const std::size_t cap = std::min(options.max_nodes, kDpHardNodeLimit);
    if (n > cap) {
        throw GuardError("dp refuses n=" + std::to_string(n) + " > node cap " + std::to_string(cap));
    }
    const std::size_t z = instance.z;

    std::vector<std::uint64_t> neighbor_mask(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        for (const Arc& a : net.neighbors(v)) neighbor_mask[v] |= bit(a.node);
    }

    std::vector<LayerEntry> layer{{bit(instance.seed), 0.0, 0}};
    // preds[k] maps each set of size k+2 (sorted by mask) to its last node.
    std::vector<std::vector<std::pair<std::uint64_t, NodeId>>> preds;
    preds.reserve(z);

    for (std::size_t size = 1; size < z; ++size) {
        std::unordered_map<std::uint64_t, Candidate> next;
        next.reserve(layer.size() * 4);
        for (const LayerEntry& entry : layer) {
            std::uint64_t frontier = 0;
            for (std::uint64_t rest = entry.mask; rest != 0; rest &= rest - 1) {
                frontier |= neighbor_mask[static_cast<std::size_t>(std::countr_zero(rest))];
            }
            frontier &= ~entry.mask;
            for (; frontier != 0; frontier &= frontier - 1) {
                const auto v = static_cast<NodeId>(std::countr_zero(frontier));
                double s = 0.0;
                for (const Arc& a : net.neighbors(v)) {
                    if ((entry.mask & bit(a.node)) != 0) s += a.in;
                }
                const double step = detail::step_time(s, net.total_influence(v), instance.alpha, instance.beta);
                if (!std::isfinite(step)) continue;
                const double t = entry.time + step;
                auto [it, fresh] = next.try_emplace(entry.mask | bit(v), Candidate{t, entry.rank, v});
                if (fresh) continue;
                Candidate& c = it->second;
                if (t < c.time || (t == c.time && std::pair(entry.rank, v) < std::pair(c.pred_rank, c.last))) {
                    c = Candidate{t, entry.rank, v};
                }
            }
        }
        if (next.empty()) return SolveResult::infeasible(instance.seed);

        std::vector<std::pair<std::uint64_t, Candidate>> sorted(next.begin(), next.end());
        next.clear();
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

        // Sequences of equal length compare by (prefix rank, last node).
        std::vector<std::uint32_t> by_sequence(sorted.size());
        std::iota(by_sequence.begin(), by_sequence.end(), 0U);
        std::sort(by_sequence.begin(), by_sequence.end(), [&](std::uint32_t a, std::uint32_t b) {
            const Candidate& ca = sorted[a].second;
            const Candidate& cb = sorted[b].second;
            return std::pair(ca.pred_rank, ca.last) < std::pair(cb.pred_rank, cb.last);
        });

        layer.assign(sorted.size(), LayerEntry{});
        for (std::uint32_t r = 0; r < by_sequence.size(); ++r) layer[by_sequence[r]].rank = r;
        std::vector<std::pair<std::uint64_t, NodeId>> last_nodes(sorted.size());
        for (std::size_t k = 0; k < sorted.size(); ++k) {
            layer[k].mask = sorted[k].first;
            layer[k].time = sorted[k].second.time;
            last_nodes[k] = {sorted[k].first, sorted[k].second.last};
        }
        preds.push_back(std::move(last_nodes));
    }

    // Layer is sorted by mask, so a strict comparison keeps the smallest encoding.
    const LayerEntry* best = &layer.front();
    for (const LayerEntry& e : layer) {
        if (e.time < best->time) best = &e;
    }

    ActivationSequence seq;
    std::uint64_t mask = best->mask;
    for (std::size_t k = preds.size(); k-- > 0;) {
        const auto& table = preds[k];
        auto it = std::lower_bound(table.begin(), table.end(), mask,
                                   [](const auto& entry, std::uint64_t m) { return entry.first < m; });
        seq.push_back(it->second);
        mask &= ~bit(it->second);
    }
    seq.push_back(instance.seed);
    std::reverse(seq.begin(), seq.end());
    return sequence_time(instance, seq);
}

}  // namespace sdiff
