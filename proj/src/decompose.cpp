#include "sdiff/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <utility>

namespace sdiff {

namespace {

struct Frame {
    NodeId node;
    NodeId parent;
    std::size_t next_arc;
};

}  // namespace

BiconnectedComponents biconnected_components(const InfluenceNetwork& net) {
    const std::size_t n = net.size();
    BiconnectedComponents out;
    if (n == 0) return out;

    constexpr std::size_t unseen = static_cast<std::size_t>(-1);
    std::vector<std::size_t> disc(n, unseen);
    std::vector<std::size_t> low(n, 0);
    std::vector<char> is_cut(n, 0);
    std::vector<std::pair<NodeId, NodeId>> edge_stack;
    std::vector<Frame> stack;
    std::size_t timer = 0;
    std::size_t root_children = 0;

    const NodeId root = 0;
    disc[root] = low[root] = timer++;
    stack.push_back({root, root, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        const NodeId v = f.node;
        auto arcs = net.neighbors(v);
        if (f.next_arc < arcs.size()) {
            const NodeId w = arcs[f.next_arc++].node;
            if (disc[w] == unseen) {
                edge_stack.emplace_back(v, w);
                disc[w] = low[w] = timer++;
                if (v == root) ++root_children;
                stack.push_back({w, v, 0});
            } else if (w != f.parent && disc[w] < disc[v]) {
                edge_stack.emplace_back(v, w);
                low[v] = std::min(low[v], disc[w]);
            }
            continue;
        }
        const NodeId parent = f.parent;
        stack.pop_back();
        if (stack.empty()) break;
        low[parent] = std::min(low[parent], low[v]);
        if (low[v] >= disc[parent]) {
            if (parent != root) is_cut[parent] = 1;
            std::vector<NodeId> block;
            while (true) {
                auto [a, b] = edge_stack.back();
                edge_stack.pop_back();
                block.push_back(a);
                block.push_back(b);
                if (a == parent && b == v) break;
            }
            std::sort(block.begin(), block.end());
            block.erase(std::unique(block.begin(), block.end()), block.end());
            out.components.push_back(std::move(block));
        }
    }
    if (root_children > 1) is_cut[root] = 1;
    if (static_cast<std::size_t>(std::count_if(disc.begin(), disc.end(), [&](std::size_t d) { return d != unseen; })) != n) {
        throw ValidationError("network is disconnected");
    }
    if (out.components.empty()) out.components.push_back({root});
    std::sort(out.components.begin(), out.components.end());
    for (NodeId v = 0; v < n; ++v) {
        if (is_cut[v]) out.cut_nodes.push_back(v);
    }
    return out;
}

std::vector<ComponentInstance> component_instances(const DiffusionInstance& instance) {
    instance.require_valid();
    if (!instance.full()) throw UnsupportedError("block decomposition only supports full diffusion (z = n)");
    const InfluenceNetwork& net = instance.network;
    const auto bcc = biconnected_components(net);
    const std::size_t n = net.size();

    std::vector<std::vector<std::size_t>> blocks_of(n);
    for (std::size_t b = 0; b < bcc.components.size(); ++b) {
        for (NodeId v : bcc.components[b]) blocks_of[v].push_back(b);
    }

    // Breadth-first walk of the block-cut tree; each block is entered once.
    std::vector<std::pair<std::size_t, NodeId>> order;
    std::vector<char> seen(bcc.components.size(), 0);
    std::deque<std::pair<std::size_t, NodeId>> queue;
    for (std::size_t b : blocks_of[instance.seed]) {
        seen[b] = 1;
        queue.emplace_back(b, instance.seed);
    }
    while (!queue.empty()) {
        auto [b, entry] = queue.front();
        queue.pop_front();
        order.emplace_back(b, entry);
        for (NodeId v : bcc.components[b]) {
            if (v == entry) continue;
            for (std::size_t c : blocks_of[v]) {
                if (!seen[c]) {
                    seen[c] = 1;
                    queue.emplace_back(c, v);
                }
            }
        }
    }

    std::vector<ComponentInstance> out;
    out.reserve(order.size());
    std::vector<NodeId> local(n, 0);
    std::vector<char> inside(n, 0);
    for (auto [b, entry] : order) {
        const auto& nodes = bcc.components[b];
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            local[nodes[i]] = static_cast<NodeId>(i);
            inside[nodes[i]] = 1;
        }
        std::vector<Edge> edges;
        for (const Edge& e : net.edges()) {
            if (inside[e.u] && inside[e.v] && e.u != e.v) edges.push_back({local[e.u], local[e.v], e.w_uv, e.w_vu});
        }
        std::vector<double> external(nodes.size(), 0.0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            double offset = net.external_influence(nodes[i]);
            for (const Arc& a : net.neighbors(nodes[i])) {
                if (!inside[a.node]) offset += a.in;
            }
            external[i] = offset;
        }
        for (NodeId v : nodes) inside[v] = 0;

        ComponentInstance ci;
        ci.to_global = nodes;
        ci.entry = entry;
        ci.instance.network = InfluenceNetwork(nodes.size(), std::move(edges), std::move(external));
        ci.instance.seed = local[entry];
        ci.instance.z = nodes.size();
        ci.instance.alpha = instance.alpha;
        ci.instance.beta = instance.beta;
        out.push_back(std::move(ci));
    }
    return out;
}

SolveResult solve_full_via_decomposition(const DiffusionInstance& instance, const InnerSolver& inner) {
    const auto parts = component_instances(instance);
    ActivationSequence merged{instance.seed};
    double sum = 0.0;
    for (const auto& part : parts) {
        const SolveResult r = inner(part.instance);
        if (!r.feasible()) return SolveResult::infeasible(instance.seed);
        if (r.sequence.size() != part.instance.z) throw std::logic_error("inner solver returned a short sequence");
        sum += r.total_time;
        for (std::size_t i = 1; i < r.sequence.size(); ++i) merged.push_back(part.to_global[r.sequence[i]]);
    }
    SolveResult out = sequence_time(instance, merged);
    if (std::abs(out.total_time - sum) > 1e-9 * std::max(1.0, std::abs(sum))) {
        throw std::logic_error("merged sequence time differs from the sum of block optima");
    }
    return out;
}

}  // namespace sdiff
