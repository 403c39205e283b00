#include "sdiff/network.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace sdiff {

namespace {

std::string edge_label(std::size_t index, const Edge& e) {
    std::ostringstream os;
    os << "edge " << index << " (" << e.u << "-" << e.v << ")";
    return os.str();
}

}  // namespace

InfluenceNetwork::InfluenceNetwork(std::size_t n, std::vector<Edge> edges, std::vector<double> external)
    : n_(n), edges_(std::move(edges)), external_(std::move(external)), adjacency_(n) {
    if (external_.empty()) external_.assign(n_, 0.0);
    if (external_.size() != n_) {
        throw ValidationError("external influence has " + std::to_string(external_.size()) +
                              " entries for " + std::to_string(n_) + " nodes");
    }
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const Edge& e = edges_[k];
        if (e.u >= n_ || e.v >= n_) {
            throw ValidationError(edge_label(k, e) + ": node id out of range for n=" + std::to_string(n_));
        }
        if (e.u == e.v) continue;
        adjacency_[e.u].push_back({e.v, e.w_vu, e.w_uv});
        adjacency_[e.v].push_back({e.u, e.w_uv, e.w_vu});
    }
    total_.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double w = external_[i];
        for (const Arc& a : adjacency_[i]) w += a.in;
        total_[i] = w;
    }
}

std::size_t InfluenceNetwork::max_degree() const noexcept {
    std::size_t best = 0;
    for (const auto& arcs : adjacency_) best = std::max(best, arcs.size());
    return best;
}

bool InfluenceNetwork::has_edge(NodeId a, NodeId b) const {
    for (const Arc& arc : adjacency_.at(a)) {
        if (arc.node == b) return true;
    }
    return false;
}

double InfluenceNetwork::influence(NodeId from, NodeId to) const {
    double w = 0.0;
    for (const Arc& arc : adjacency_.at(to)) {
        if (arc.node == from) w += arc.in;
    }
    return w;
}

std::vector<std::string> InfluenceNetwork::validate() const {
    std::vector<std::string> out;
    std::map<std::pair<NodeId, NodeId>, std::size_t> seen;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const Edge& e = edges_[k];
        if (e.u == e.v) {
            out.push_back(edge_label(k, e) + ": self-loop");
            continue;
        }
        auto key = std::minmax(e.u, e.v);
        auto [it, fresh] = seen.emplace(key, k);
        if (!fresh) {
            out.push_back(edge_label(k, e) + ": duplicate of edge " + std::to_string(it->second));
        }
        if (!std::isfinite(e.w_uv) || e.w_uv < 0.0) {
            out.push_back(edge_label(k, e) + ": invalid weight w_uv=" + std::to_string(e.w_uv));
        }
        if (!std::isfinite(e.w_vu) || e.w_vu < 0.0) {
            out.push_back(edge_label(k, e) + ": invalid weight w_vu=" + std::to_string(e.w_vu));
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (!std::isfinite(external_[i]) || external_[i] < 0.0) {
            out.push_back("node " + std::to_string(i) + ": invalid external influence " +
                          std::to_string(external_[i]));
        }
        double w = external_[i];
        for (const Arc& a : adjacency_[i]) w += a.in;
        if (w != total_[i] && !(std::isnan(w) && std::isnan(total_[i]))) {
            out.push_back("node " + std::to_string(i) + ": cached total influence " +
                          std::to_string(total_[i]) + " differs from " + std::to_string(w));
        }
    }
    return out;
}

std::vector<std::string> DiffusionInstance::validate() const {
    std::vector<std::string> out = network.validate();
    const std::size_t n = network.size();
    if (n == 0) out.emplace_back("instance: network has no nodes");
    if (seed >= n) out.push_back("instance: seed " + std::to_string(seed) + " out of range");
    if (z < 1 || z > n) {
        out.push_back("instance: z=" + std::to_string(z) + " outside [1, " + std::to_string(n) + "]");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) out.push_back("instance: alpha=" + std::to_string(alpha) + " outside [0, 1]");
    if (!(beta > 0.0 && beta <= 1.0)) out.push_back("instance: beta=" + std::to_string(beta) + " outside (0, 1]");
    return out;
}

void DiffusionInstance::require_valid() const {
    auto violations = validate();
    if (!violations.empty()) throw ValidationError(violations.front());
}

double active_influence(const InfluenceNetwork& net, const NodeSet& active, NodeId i) {
    double s = 0.0;
    for (const Arc& a : net.neighbors(i)) {
        if (active.contains(a.node)) s += a.in;
    }
    return s;
}

double activation_probability(const InfluenceNetwork& net, const NodeSet& active, NodeId i, double alpha,
                              double beta) {
    if (i >= net.size()) throw ValidationError("node " + std::to_string(i) + " out of range");
    if (active.contains(i)) throw ValidationError("node " + std::to_string(i) + " is already active");
    const double w = net.total_influence(i);
    if (!(w > 0.0)) throw DomainError("node with zero total influence: " + std::to_string(i));
    return detail::probability(active_influence(net, active, i), w, alpha, beta);
}

double expected_step_time(const InfluenceNetwork& net, const NodeSet& active, NodeId i, double alpha,
                          double beta) {
    const double p = activation_probability(net, active, i, alpha, beta);
    if (!(p > 0.0)) return kInfinity;
    return detail::step_time(active_influence(net, active, i), net.total_influence(i), alpha, beta);
}

void check_sequence(const DiffusionInstance& instance, std::span<const NodeId> seq) {
    const std::size_t n = instance.size();
    if (seq.empty()) throw ValidationError("sequence is empty");
    if (seq.front() != instance.seed) {
        throw ValidationError("sequence starts at " + std::to_string(seq.front()) + ", not at seed " +
                              std::to_string(instance.seed));
    }
    NodeSet seen(n);
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const NodeId v = seq[k];
        if (v >= n) throw ValidationError("sequence[" + std::to_string(k) + "]=" + std::to_string(v) + " out of range");
        if (seen.contains(v)) {
            throw ValidationError("sequence[" + std::to_string(k) + "]=" + std::to_string(v) + " repeats a node");
        }
        seen.insert(v);
    }
}

SolveResult sequence_time(const DiffusionInstance& instance, std::span<const NodeId> seq) {
    check_sequence(instance, seq);
    const InfluenceNetwork& net = instance.network;
    SolveResult result;
    result.sequence.assign(seq.begin(), seq.end());
    result.step_times.reserve(seq.size());
    NodeSet active(net.size());
    active.insert(seq.front());
    result.step_times.push_back(0.0);
    double total = 0.0;
    for (std::size_t k = 1; k < seq.size(); ++k) {
        const NodeId v = seq[k];
        const double t = detail::step_time(active_influence(net, active, v), net.total_influence(v),
                                           instance.alpha, instance.beta);
        result.step_times.push_back(t);
        total += t;
        active.insert(v);
    }
    result.total_time = total;
    return result;
}

}  // namespace sdiff
