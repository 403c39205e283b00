#include "sdiff/generators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "sdiff/random.hpp"

namespace sdiff {

namespace {

void require_valid(const SetCoverInstance& sc) {
    auto violations = sc.validate();
    if (!violations.empty()) throw ValidationError(violations.front());
}

double draw_weight(Rng& rng, const WeightRange& range) {
    if (range.integral) {
        const auto lo = static_cast<long long>(std::ceil(range.lo));
        const auto hi = static_cast<long long>(std::floor(range.hi));
        if (hi < lo) throw ValidationError("integral weight range contains no integer");
        return static_cast<double>(lo + static_cast<long long>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))));
    }
    return rng.uniform(range.lo, range.hi);
}

void check_range(const WeightRange& range) {
    if (!(range.lo >= 0.0) || !(range.hi >= range.lo) || !std::isfinite(range.hi)) {
        throw ValidationError("weight range must satisfy 0 <= lo <= hi < inf");
    }
}

// Normalises each pair to u < v, sorts, then draws weights in that order.
InfluenceNetwork with_random_weights(std::size_t n, std::vector<std::pair<NodeId, NodeId>> pairs, Rng& rng,
                                     const WeightRange& range) {
    for (auto& [u, v] : pairs) {
        if (u > v) std::swap(u, v);
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [u, v] : pairs) {
        const double w_uv = draw_weight(rng, range);
        const double w_vu = draw_weight(rng, range);
        edges.push_back({u, v, w_uv, w_vu});
    }
    return InfluenceNetwork(n, std::move(edges));
}

std::vector<NodeId> random_permutation(std::size_t n, Rng& rng) {
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    return perm;
}

}  // namespace

std::vector<std::string> SetCoverInstance::validate() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].empty()) out.push_back("set " + std::to_string(i) + " is empty");
        for (std::size_t u : sets[i]) {
            if (u >= universe) {
                out.push_back("set " + std::to_string(i) + " has element " + std::to_string(u) +
                              " outside a universe of size " + std::to_string(universe));
            }
        }
    }
    if (k && *k > sets.size()) out.push_back("k exceeds the number of sets");
    return out;
}

std::optional<std::size_t> brute_force_set_cover(const SetCoverInstance& sc) {
    require_valid(sc);
    const std::size_t m = sc.sets.size();
    if (m > 20) throw GuardError("set cover enumeration refuses more than 20 sets");
    std::optional<std::size_t> best;
    std::vector<char> covered(sc.universe);
    for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        if (best && size >= *best) continue;
        std::fill(covered.begin(), covered.end(), 0);
        for (std::size_t i = 0; i < m; ++i) {
            if ((mask >> i) & 1U) {
                for (std::size_t u : sc.sets[i]) covered[u] = 1;
            }
        }
        if (std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; })) best = size;
    }
    return best;
}

DiffusionInstance make_gk(int k) {
    if (k < 1) throw ValidationError("G(k) needs k >= 1");
    const auto kk = static_cast<NodeId>(k);
    const NodeId a_count = kk * kk;
    std::vector<Edge> edges;
    for (NodeId i = 1; i <= a_count; ++i) edges.push_back({0, i, 1.0, 1.0});
    for (NodeId i = 1; i <= a_count; ++i) {
        for (NodeId j = 1; j < kk; ++j) edges.push_back({i, a_count + j, 1.0, 1.0});
    }
    DiffusionInstance instance;
    instance.network = InfluenceNetwork(static_cast<std::size_t>(a_count + kk), std::move(edges));
    instance.seed = 0;
    instance.z = instance.network.size();
    return instance;
}

HardnessInstance make_np_hardness(const SetCoverInstance& sc, std::size_t k, HardnessOptions options) {
    require_valid(sc);
    if (k > sc.sets.size()) throw ValidationError("k exceeds the number of sets");
    GadgetLayout layout{sc.sets.size(), sc.universe, 1};
    const double heavy = static_cast<double>(sc.universe * sc.sets.size());
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < layout.set_count; ++i) {
        edges.push_back({layout.set_node(i), layout.seed(), 1.0, 1.0});
    }
    std::size_t next = layout.node_count();
    for (std::size_t i = 0; i < layout.set_count; ++i) {
        const NodeId q = layout.q_node(i);
        const NodeId s = layout.set_node(i);
        if (options.binary_weights) {
            for (std::size_t r = 0; r < sc.universe * sc.sets.size(); ++r) {
                const auto mid = static_cast<NodeId>(next++);
                edges.push_back({q, mid, 1.0, 0.0});
                edges.push_back({mid, s, 1.0, 0.0});
            }
        } else {
            edges.push_back({s, q, 0.0, heavy});
        }
        edges.push_back({q, layout.q_prime_node(i), 1.0, 1.0});
    }
    for (std::size_t u = 0; u < sc.universe; ++u) {
        for (std::size_t j = 0; j < sc.sets.size(); ++j) {
            const auto& set = sc.sets[j];
            if (std::find(set.begin(), set.end(), u) != set.end()) {
                edges.push_back({layout.element_node(u), layout.set_node(j), 0.0, 1.0});
            }
        }
    }
    HardnessInstance out;
    out.layout = layout;
    out.instance.network = InfluenceNetwork(next, std::move(edges));
    out.instance.seed = layout.seed();
    out.instance.z = k + sc.universe + 1;
    out.threshold = static_cast<double>(k) * (heavy + 1.0) + heavy;
    return out;
}

InapproxInstance make_inapprox(const SetCoverInstance& sc, double lambda) {
    require_valid(sc);
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    const std::size_t m = sc.sets.size();
    GadgetLayout layout{m, sc.universe, m + 1};
    const std::size_t z = sc.universe * (m + 1) + 1;
    const double set_cost = static_cast<double>(z) * std::pow(static_cast<double>(m), lambda + 1.0);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < m; ++i) edges.push_back({layout.set_node(i), layout.seed(), 1.0, 1.0});
    for (std::size_t i = 0; i < m; ++i) {
        edges.push_back({layout.set_node(i), layout.q_node(i), 0.0, set_cost - 1.0});
        edges.push_back({layout.q_node(i), layout.q_prime_node(i), 1.0, 1.0});
    }
    for (std::size_t u = 0; u < sc.universe; ++u) {
        for (std::size_t c = 0; c < layout.copies; ++c) {
            for (std::size_t j = 0; j < m; ++j) {
                const auto& set = sc.sets[j];
                if (std::find(set.begin(), set.end(), u) != set.end()) {
                    edges.push_back({layout.element_node(u, c), layout.set_node(j), 0.0, 1.0});
                }
            }
        }
    }
    InapproxInstance out;
    out.cover = sc;
    out.lambda = lambda;
    out.set_cost = set_cost;
    out.layout = layout;
    out.instance.network = InfluenceNetwork(layout.node_count(), std::move(edges));
    out.instance.seed = layout.seed();
    out.instance.z = z;
    return out;
}

std::vector<std::size_t> extract_cover(const InapproxInstance& gadget, std::span<const NodeId> seq) {
    const SolveResult priced = sequence_time(gadget.instance, seq);
    if (seq.size() != gadget.instance.z) {
        throw ValidationError("sequence activates " + std::to_string(seq.size()) + " nodes, expected z=" +
                              std::to_string(gadget.instance.z));
    }
    if (!priced.feasible()) throw ValidationError("sequence has infinite expected time");
    std::vector<std::size_t> cover;
    for (NodeId v : seq) {
        if (v >= gadget.layout.set_node(0) && v < gadget.layout.set_node(gadget.layout.set_count)) {
            cover.push_back(v - gadget.layout.set_node(0));
        }
    }
    std::sort(cover.begin(), cover.end());
    return cover;
}

BinarizedNetwork binarize_weights(const InfluenceNetwork& net) {
    auto integral = [](double w) { return std::isfinite(w) && w >= 0.0 && std::floor(w) == w; };
    std::size_t added = 0;
    for (std::size_t k = 0; k < net.edge_count(); ++k) {
        const Edge& e = net.edges()[k];
        if (!integral(e.w_uv) || !integral(e.w_vu)) {
            throw ValidationError("edge " + std::to_string(k) + " (" + std::to_string(e.u) + "-" +
                                  std::to_string(e.v) + ") has a non-integer weight");
        }
        added += static_cast<std::size_t>(e.w_uv + e.w_vu);
    }
    BinarizedNetwork out;
    std::vector<Edge> edges;
    edges.reserve(2 * added);
    auto next = static_cast<NodeId>(net.size());
    auto add_paths = [&](NodeId from, NodeId to, double weight) {
        for (double r = 0; r < weight; r += 1.0) {
            const NodeId mid = next++;
            edges.push_back({from, mid, 1.0, 0.0});
            edges.push_back({mid, to, 1.0, 0.0});
        }
    };
    for (const Edge& e : net.edges()) {
        add_paths(e.u, e.v, e.w_uv);
        add_paths(e.v, e.u, e.w_vu);
        out.offset += e.w_uv + e.w_vu;
    }
    std::vector<double> external(net.external().begin(), net.external().end());
    external.resize(next, 0.0);
    out.network = InfluenceNetwork(next, std::move(edges), std::move(external));
    return out;
}

InfluenceNetwork random_connected(std::size_t n, double edge_prob, WeightRange weights, std::uint64_t rng_seed) {
    if (n < 1) throw ValidationError("random_connected needs n >= 1");
    check_range(weights);
    Rng rng(rng_seed);
    const auto perm = random_permutation(n, rng);
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (std::size_t i = 1; i < n; ++i) {
        const NodeId a = perm[i];
        const NodeId b = perm[rng.below(i)];
        pairs.insert(std::minmax(a, b));
    }
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (pairs.count({u, v}) == 0 && rng.bernoulli(edge_prob)) pairs.insert({u, v});
        }
    }
    return with_random_weights(n, {pairs.begin(), pairs.end()}, rng, weights);
}

InfluenceNetwork random_tree(std::size_t n, std::size_t max_degree, WeightRange weights, std::uint64_t rng_seed) {
    if (n < 1) throw ValidationError("random_tree needs n >= 1");
    if (n > 2 && max_degree < 2) throw ValidationError("a tree on more than 2 nodes needs max_degree >= 2");
    check_range(weights);
    Rng rng(rng_seed);
    const auto perm = random_permutation(n, rng);
    std::vector<std::size_t> degree(n, 0);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    std::vector<NodeId> open;
    for (std::size_t i = 1; i < n; ++i) {
        open.clear();
        for (std::size_t j = 0; j < i; ++j) {
            if (degree[perm[j]] < max_degree) open.push_back(perm[j]);
        }
        const NodeId parent = open[rng.below(open.size())];
        pairs.emplace_back(parent, perm[i]);
        ++degree[parent];
        ++degree[perm[i]];
    }
    return with_random_weights(n, std::move(pairs), rng, weights);
}

InfluenceNetwork random_partial_two_tree(std::size_t n, std::size_t max_degree, WeightRange weights,
                                         std::uint64_t rng_seed) {
    if (n < 1) throw ValidationError("random_partial_two_tree needs n >= 1");
    if (n > 2 && max_degree < 2) throw ValidationError("need max_degree >= 2 for more than 2 nodes");
    check_range(weights);
    Rng rng(rng_seed);
    const auto perm = random_permutation(n, rng);
    std::vector<std::size_t> degree(n, 0);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    auto join = [&](NodeId a, NodeId b) {
        pairs.emplace_back(a, b);
        ++degree[a];
        ++degree[b];
    };
    std::vector<NodeId> open;
    std::vector<std::pair<NodeId, NodeId>> open_edges;
    for (std::size_t i = 1; i < n; ++i) {
        const NodeId v = perm[i];
        open_edges.clear();
        for (auto [a, b] : pairs) {
            if (degree[a] < max_degree && degree[b] < max_degree) open_edges.emplace_back(a, b);
        }
        if (!open_edges.empty() && rng.bernoulli(0.5)) {
            auto [a, b] = open_edges[rng.below(open_edges.size())];
            join(a, v);
            join(b, v);
            continue;
        }
        open.clear();
        for (std::size_t j = 0; j < i; ++j) {
            if (degree[perm[j]] < max_degree) open.push_back(perm[j]);
        }
        join(open[rng.below(open.size())], v);
    }
    return with_random_weights(n, std::move(pairs), rng, weights);
}

}  // namespace sdiff
