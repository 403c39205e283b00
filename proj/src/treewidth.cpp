#include "sdiff/treewidth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace sdiff {

namespace {

using Key = std::uint64_t;
constexpr std::int8_t kOutside = -1;

// Sequence of (position in the shared set + 1), four bits per entry.
// Shared sets have at most 15 members, so a zero nibble ends the key.
template <typename Cells>
Key projection_key(const Cells& cells, std::size_t length, const std::vector<std::int8_t>& shared_index) {
    Key key = 0;
    unsigned shift = 0;
    for (std::size_t i = 0; i < length; ++i) {
        const std::int8_t s = shared_index[cells[i]];
        if (s == kOutside) continue;
        key |= static_cast<Key>(s + 1) << shift;
        shift += 4;
    }
    return key;
}

std::vector<NodeId> sorted_unique(std::span<const NodeId> nodes) {
    std::vector<NodeId> out(nodes.begin(), nodes.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Index of each member of `ground` in `shared`, or kOutside.
std::vector<std::int8_t> shared_positions(const std::vector<NodeId>& ground, const std::vector<NodeId>& shared) {
    std::vector<std::int8_t> out(ground.size(), kOutside);
    for (std::size_t i = 0; i < ground.size(); ++i) {
        auto it = std::lower_bound(shared.begin(), shared.end(), ground[i]);
        if (it != shared.end() && *it == ground[i]) out[i] = static_cast<std::int8_t>(it - shared.begin());
    }
    return out;
}

std::vector<NodeId> intersect(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool contains(const std::vector<NodeId>& sorted, NodeId v) { return std::binary_search(sorted.begin(), sorted.end(), v); }

// Keys a parent ordering must produce to have a compatible ordering in one child.
struct ChildFilter {
    std::vector<std::int8_t> parent_shared;  // per parent ground index
    const std::unordered_set<Key>* keys = nullptr;
};

struct Orderings {
    std::size_t stride = 0;
    std::vector<std::uint8_t> cells;
    std::vector<std::uint8_t> lengths;
};

class Enumerator {
public:
    Enumerator(const DiffusionInstance& instance, const std::vector<NodeId>& bag, const std::vector<NodeId>& ground,
               DiffusionMode mode, const std::vector<ChildFilter>& filters)
        : mode_(mode), filters_(filters), m_(ground.size()) {
        const InfluenceNetwork& net = instance.network;
        adjacency_.assign(m_, 0);
        in_bag_.assign(m_, 0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (ground[i] == instance.seed) seed_ = static_cast<int>(i);
            in_bag_[i] = contains(bag, ground[i]) ? 1 : 0;
            for (const Arc& a : net.neighbors(ground[i])) {
                auto it = std::lower_bound(ground.begin(), ground.end(), a.node);
                if (it != ground.end() && *it == a.node) adjacency_[i] |= 1U << (it - ground.begin());
            }
        }
        out_.stride = m_;
    }

    Orderings run() {
        prefix_.clear();
        if (seed_ >= 0) {
            push(static_cast<std::uint8_t>(seed_));
        } else {
            if (mode_ == DiffusionMode::Partial || m_ == 0) emit();
            extend();
        }
        return std::move(out_);
    }

private:
    void push(std::uint8_t x) {
        prefix_.push_back(x);
        used_ |= 1U << x;
        if (mode_ == DiffusionMode::Partial || prefix_.size() == m_) emit();
        extend();
        used_ &= ~(1U << x);
        prefix_.pop_back();
    }

    void extend() {
        if (prefix_.size() == m_) return;
        for (std::size_t x = 0; x < m_; ++x) {
            if ((used_ >> x) & 1U) continue;
            if (static_cast<int>(x) == seed_) continue;
            if (in_bag_[x] && (adjacency_[x] & used_) == 0) continue;
            push(static_cast<std::uint8_t>(x));
        }
    }

    void emit() {
        for (const ChildFilter& f : filters_) {
            if (f.keys->count(projection_key(prefix_, prefix_.size(), f.parent_shared)) == 0) return;
        }
        out_.cells.insert(out_.cells.end(), prefix_.begin(), prefix_.end());
        out_.cells.resize(out_.cells.size() + (m_ - prefix_.size()), 0);
        out_.lengths.push_back(static_cast<std::uint8_t>(prefix_.size()));
    }

    DiffusionMode mode_;
    const std::vector<ChildFilter>& filters_;
    std::size_t m_;
    int seed_ = -1;
    std::vector<std::uint32_t> adjacency_;
    std::vector<char> in_bag_;
    std::vector<std::uint8_t> prefix_;
    std::uint32_t used_ = 0;
    Orderings out_;
};

void check_ground_size(std::size_t size, const TreewidthOptions& options) {
    if (options.max_closed_bag > kMaxClosedBagLimit) {
        throw ValidationError("max_closed_bag may not exceed " + std::to_string(kMaxClosedBagLimit));
    }
    if (size > options.max_closed_bag) {
        throw GuardError("closed bag of size " + std::to_string(size) + " exceeds the cap of " +
                         std::to_string(options.max_closed_bag));
    }
}

// Per-child summary of the values a parent ordering can draw on, by key.
struct ChildSummary {
    std::vector<std::int8_t> parent_shared;
    std::vector<std::int8_t> child_shared;
    std::vector<std::size_t> shared_bag_slots;  // child bag indices also in the parent bag
    std::unordered_set<Key> keys;
    std::unordered_map<Key, double> full;
    std::unordered_map<Key, std::vector<double>> partial;  // indexed by new nodes j
};

double shared_cost(const BagTable& child, std::size_t r, const std::vector<std::size_t>& slots, std::size_t* count) {
    double cost = 0.0;
    std::size_t active = 0;
    for (std::size_t b : slots) {
        const double t = child.step_times[r * child.bag.size() + b];
        if (std::isinf(t)) continue;
        cost += t;
        ++active;
    }
    if (count != nullptr) *count = active;
    return cost;
}

class TableBuilder {
public:
    TableBuilder(const DiffusionInstance& instance, const TreeDecomposition& td, DiffusionMode mode,
                 const TreewidthOptions& options)
        : instance_(instance), td_(td), mode_(mode), options_(options), z_(instance.z) {}

    TreewidthTables build() {
        instance_.require_valid();
        if (mode_ == DiffusionMode::Full && !instance_.full()) {
            throw ValidationError("full-diffusion solver needs z = n");
        }
        const auto report = validate_decomposition(instance_.network, td_);
        if (!report.valid()) throw ValidationError("invalid tree decomposition: " + report.violations.front());
        if (options_.max_closed_bag > kMaxClosedBagLimit) {
            throw ValidationError("max_closed_bag may not exceed " + std::to_string(kMaxClosedBagLimit));
        }

        TreewidthTables out;
        out.mode = mode_;
        out.tree = root_tree(td_);
        const std::size_t count = td_.bags.size();
        out.bags.resize(count);
        grounds_.resize(count);
        for (std::size_t t = 0; t < count; ++t) {
            out.bags[t].bag = sorted_unique(td_.bags[t]);
            grounds_[t] = closed_bag(instance_.network, out.bags[t].bag);
            check_ground_size(grounds_[t].size(), options_);
            out.bags[t].ground = grounds_[t];
        }
        check_sibling_overlap(out);

        summaries_.resize(count);
        for (std::size_t i = out.tree.top_down.size(); i-- > 0;) fill_bag(out, out.tree.top_down[i]);

        const BagTable& root = out.bags[td_.root];
        for (std::size_t r = 0; r < root.ordering_count(); ++r) {
            const double v = mode_ == DiffusionMode::Full ? root.best[r] : root.best[r * (z_ + 1) + z_];
            out.optimum = std::min(out.optimum, v);
        }
        return out;
    }

    const std::vector<std::vector<ChildSummary>>& summaries() const { return summaries_; }

private:
    // Nodes under two siblings may only meet inside their parent's bag.
    void check_sibling_overlap(const TreewidthTables& out) const {
        const std::size_t n = instance_.size();
        std::vector<NodeSet> below(td_.bags.size(), NodeSet(n));
        for (std::size_t i = out.tree.top_down.size(); i-- > 0;) {
            const std::size_t t = out.tree.top_down[i];
            for (NodeId v : out.bags[t].bag) below[t].insert(v);
            NodeSet seen(n);
            for (std::size_t c : out.tree.children[t]) {
                for (NodeId v : below[c].to_vector()) {
                    if (seen.contains(v) && !contains(out.bags[t].bag, v)) {
                        throw std::logic_error("subtrees of sibling bags overlap outside their parent");
                    }
                    seen.insert(v);
                    below[t].insert(v);
                }
            }
        }
    }

    void fill_bag(TreewidthTables& out, std::size_t t) {
        BagTable& table = out.bags[t];
        const auto& ground = grounds_[t];
        const auto& children = out.tree.children[t];
        auto& sums = summaries_[t];
        sums.clear();
        sums.resize(children.size());
        std::vector<ChildFilter> filters;
        for (std::size_t i = 0; i < children.size(); ++i) {
            summarize_child(out, t, children[i], sums[i]);
            filters.push_back({sums[i].parent_shared, &sums[i].keys});
        }

        Orderings ord = Enumerator(instance_, table.bag, ground, mode_, filters).run();
        table.ordering_length_stride = ord.stride;
        table.cells = std::move(ord.cells);
        table.lengths = std::move(ord.lengths);

        const std::size_t rows = table.ordering_count();
        const std::size_t width = table.bag.size();
        table.step_times.assign(rows * width, kInfinity);
        const std::size_t per_row = mode_ == DiffusionMode::Full ? 1 : z_ + 1;
        table.best.assign(rows * per_row, kInfinity);

        std::vector<std::size_t> bag_slot(ground.size(), width);
        for (std::size_t b = 0; b < width; ++b) {
            bag_slot[static_cast<std::size_t>(std::lower_bound(ground.begin(), ground.end(), table.bag[b]) -
                                              ground.begin())] = b;
        }

        std::vector<double> merged;
        std::vector<double> scratch;
        for (std::size_t r = 0; r < rows; ++r) {
            const std::uint8_t* cells = &table.cells[r * table.ordering_length_stride];
            const std::size_t len = table.lengths[r];
            double cost = 0.0;
            std::size_t activated = 0;
            for (std::size_t p = 0; p < len; ++p) {
                const std::size_t b = bag_slot[cells[p]];
                if (b == width) continue;
                const double step = bag_step(ground, cells, p);
                table.step_times[r * width + b] = step;
                cost += step;
                ++activated;
            }
            if (mode_ == DiffusionMode::Full) {
                double total = cost;
                for (std::size_t i = 0; i < children.size(); ++i) {
                    total += sums[i].full.at(projection_key(cells, len, sums[i].parent_shared));
                }
                table.best[r] = total;
                continue;
            }
            child_convolution(sums, cells, len, merged, scratch);
            for (std::size_t k = activated; k <= z_; ++k) {
                table.best[r * per_row + k] = cost + merged[k - activated];
            }
        }
    }

    // Step time of ground[cells[p]] given the nodes before it in the ordering.
    double bag_step(const std::vector<NodeId>& ground, const std::uint8_t* cells, std::size_t p) const {
        const NodeId v = ground[cells[p]];
        if (v == instance_.seed) return 0.0;
        const InfluenceNetwork& net = instance_.network;
        double s = 0.0;
        for (const Arc& a : net.neighbors(v)) {
            for (std::size_t q = 0; q < p; ++q) {
                if (ground[cells[q]] == a.node) {
                    s += a.in;
                    break;
                }
            }
        }
        return detail::step_time(s, net.total_influence(v), instance_.alpha, instance_.beta);
    }

    // Min-plus convolution of the children's vectors for one parent ordering.
    void child_convolution(const std::vector<ChildSummary>& sums, const std::uint8_t* cells, std::size_t len,
                           std::vector<double>& merged, std::vector<double>& scratch) const {
        merged.assign(z_ + 1, kInfinity);
        merged[0] = 0.0;
        for (const ChildSummary& s : sums) {
            const auto& f = s.partial.at(projection_key(cells, len, s.parent_shared));
            scratch.assign(z_ + 1, kInfinity);
            for (std::size_t a = 0; a <= z_; ++a) {
                if (std::isinf(merged[a])) continue;
                for (std::size_t j = 0; a + j <= z_ && j < f.size(); ++j) {
                    scratch[a + j] = std::min(scratch[a + j], merged[a] + f[j]);
                }
            }
            merged.swap(scratch);
        }
    }

    void summarize_child(const TreewidthTables& out, std::size_t t, std::size_t c, ChildSummary& s) const {
        const auto shared = intersect(grounds_[t], grounds_[c]);
        if (shared.size() > kMaxClosedBagLimit) throw std::logic_error("shared ground exceeds key capacity");
        s.parent_shared = shared_positions(grounds_[t], shared);
        s.child_shared = shared_positions(grounds_[c], shared);
        const BagTable& child = out.bags[c];
        for (std::size_t b = 0; b < child.bag.size(); ++b) {
            if (contains(out.bags[t].bag, child.bag[b])) s.shared_bag_slots.push_back(b);
        }
        for (std::size_t r = 0; r < child.ordering_count(); ++r) {
            const Key key = projection_key(&child.cells[r * child.ordering_length_stride], child.lengths[r],
                                           s.child_shared);
            s.keys.insert(key);
            std::size_t count = 0;
            const double cost = shared_cost(child, r, s.shared_bag_slots, &count);
            if (mode_ == DiffusionMode::Full) {
                auto [it, fresh] = s.full.try_emplace(key, kInfinity);
                const double v = child.best[r];
                if (std::isfinite(v)) it->second = std::min(it->second, v - cost);
                continue;
            }
            auto [it, fresh] = s.partial.try_emplace(key, std::vector<double>(z_ + 1, kInfinity));
            for (std::size_t j = 0; j + count <= z_; ++j) {
                const double v = child.best[r * (z_ + 1) + j + count];
                if (std::isfinite(v)) it->second[j] = std::min(it->second[j], v - cost);
            }
        }
    }

    const DiffusionInstance& instance_;
    const TreeDecomposition& td_;
    DiffusionMode mode_;
    TreewidthOptions options_;
    std::size_t z_;
    std::vector<std::vector<NodeId>> grounds_;
    std::vector<std::vector<ChildSummary>> summaries_;
};

// Chosen ordering of one bag and the nodes its subtree must activate.
struct Choice {
    std::size_t row = 0;
    std::size_t budget = 0;
};

class Reconstructor {
public:
    Reconstructor(const DiffusionInstance& instance, const TreewidthTables& tables,
                  const std::vector<std::vector<ChildSummary>>& summaries)
        : instance_(instance), tables_(tables), summaries_(summaries), z_(instance.z) {}

    ActivationSequence run() {
        const std::size_t root = tables_.tree.top_down.front();
        const BagTable& table = tables_.bags[root];
        std::size_t best_row = table.ordering_count();
        double best = kInfinity;
        for (std::size_t r = 0; r < table.ordering_count(); ++r) {
            if (value(table, r, z_) < best) {
                best = value(table, r, z_);
                best_row = r;
            }
        }
        if (best_row == table.ordering_count()) return {};
        chosen_.assign(tables_.bags.size(), Choice{});
        chosen_[root] = {best_row, z_};
        for (std::size_t t : tables_.tree.top_down) descend(t);
        return merge();
    }

private:
    double value(const BagTable& table, std::size_t r, std::size_t k) const {
        return tables_.mode == DiffusionMode::Full ? table.best[r] : table.best[r * (z_ + 1) + k];
    }

    void descend(std::size_t t) {
        const BagTable& table = tables_.bags[t];
        const auto& children = tables_.tree.children[t];
        if (children.empty()) return;
        const auto [row, budget] = chosen_[t];
        const std::uint8_t* cells = &table.cells[row * table.ordering_length_stride];
        const std::size_t len = table.lengths[row];
        const auto& sums = summaries_[t];

        if (tables_.mode == DiffusionMode::Full) {
            for (std::size_t i = 0; i < children.size(); ++i) {
                const Key key = projection_key(cells, len, sums[i].parent_shared);
                const double target = sums[i].full.at(key);
                chosen_[children[i]] = {argmin_full(children[i], sums[i], key, target), 0};
            }
            return;
        }

        std::size_t activated = 0;
        for (std::size_t b = 0; b < table.bag.size(); ++b) {
            if (!std::isinf(table.step_times[row * table.bag.size() + b])) ++activated;
        }
        // Prefix convolutions over the children, then peel budgets off from the last child.
        std::vector<const std::vector<double>*> f;
        for (std::size_t i = 0; i < children.size(); ++i) {
            f.push_back(&sums[i].partial.at(projection_key(cells, len, sums[i].parent_shared)));
        }
        std::vector<std::vector<double>> prefix(children.size() + 1, std::vector<double>(z_ + 1, kInfinity));
        prefix[0][0] = 0.0;
        for (std::size_t i = 0; i < children.size(); ++i) {
            for (std::size_t a = 0; a <= z_; ++a) {
                if (std::isinf(prefix[i][a])) continue;
                for (std::size_t j = 0; a + j <= z_; ++j) {
                    prefix[i + 1][a + j] = std::min(prefix[i + 1][a + j], prefix[i][a] + (*f[i])[j]);
                }
            }
        }
        std::size_t rest = budget - activated;
        for (std::size_t i = children.size(); i-- > 0;) {
            std::size_t pick = z_ + 1;
            double best = kInfinity;
            for (std::size_t j = 0; j <= rest; ++j) {
                const double v = prefix[i][rest - j] + (*f[i])[j];
                if (v < best) {
                    best = v;
                    pick = j;
                }
            }
            if (pick > z_) throw std::logic_error("no finite budget split during reconstruction");
            const Key key = projection_key(cells, len, sums[i].parent_shared);
            chosen_[children[i]] = argmin_partial(children[i], sums[i], key, pick, (*f[i])[pick]);
            rest -= pick;
        }
    }

    std::size_t argmin_full(std::size_t c, const ChildSummary& s, Key key, double target) const {
        const BagTable& child = tables_.bags[c];
        for (std::size_t r = 0; r < child.ordering_count(); ++r) {
            if (projection_key(&child.cells[r * child.ordering_length_stride], child.lengths[r], s.child_shared) !=
                key) {
                continue;
            }
            if (child.best[r] - shared_cost(child, r, s.shared_bag_slots, nullptr) == target) return r;
        }
        throw std::logic_error("no child ordering attains the recorded minimum");
    }

    Choice argmin_partial(std::size_t c, const ChildSummary& s, Key key, std::size_t j, double target) const {
        const BagTable& child = tables_.bags[c];
        for (std::size_t r = 0; r < child.ordering_count(); ++r) {
            if (projection_key(&child.cells[r * child.ordering_length_stride], child.lengths[r], s.child_shared) !=
                key) {
                continue;
            }
            std::size_t count = 0;
            const double cost = shared_cost(child, r, s.shared_bag_slots, &count);
            if (j + count > z_) continue;
            if (child.best[r * (z_ + 1) + j + count] - cost == target) return {r, j + count};
        }
        throw std::logic_error("no child ordering attains the recorded minimum");
    }

    // One linear extension of every chosen bag ordering, smallest id first.
    ActivationSequence merge() const {
        const std::size_t n = instance_.size();
        std::vector<std::vector<NodeId>> after(n);
        std::vector<std::size_t> indegree(n, 0);
        std::vector<char> present(n, 0);
        std::set<std::pair<NodeId, NodeId>> seen;
        for (std::size_t t = 0; t < tables_.bags.size(); ++t) {
            const BagTable& table = tables_.bags[t];
            const ActivationSequence seq = table.ordering(chosen_[t].row);
            for (std::size_t i = 0; i < seq.size(); ++i) {
                present[seq[i]] = 1;
                if (i > 0 && seen.insert({seq[i - 1], seq[i]}).second) {
                    after[seq[i - 1]].push_back(seq[i]);
                    ++indegree[seq[i]];
                }
            }
        }
        std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
        std::size_t total = 0;
        for (NodeId v = 0; v < n; ++v) {
            if (!present[v]) continue;
            ++total;
            if (indegree[v] == 0) ready.push(v);
        }
        ActivationSequence out;
        while (!ready.empty()) {
            const NodeId v = ready.top();
            ready.pop();
            out.push_back(v);
            for (NodeId w : after[v]) {
                if (--indegree[w] == 0) ready.push(w);
            }
        }
        if (out.size() != total) throw std::logic_error("chosen bag orderings are cyclic");
        return out;
    }

    const DiffusionInstance& instance_;
    const TreewidthTables& tables_;
    const std::vector<std::vector<ChildSummary>>& summaries_;
    std::size_t z_;
    std::vector<Choice> chosen_;
};

SolveResult solve(const DiffusionInstance& instance, const TreeDecomposition& td, DiffusionMode mode,
                  const TreewidthOptions& options) {
    TableBuilder builder(instance, td, mode, options);
    const TreewidthTables tables = builder.build();
    if (!std::isfinite(tables.optimum)) return SolveResult::infeasible(instance.seed);
    const ActivationSequence seq = Reconstructor(instance, tables, builder.summaries()).run();
    if (seq.size() != instance.z) throw std::logic_error("reconstructed sequence has the wrong length");
    SolveResult out = sequence_time(instance, seq);
    if (std::abs(out.total_time - tables.optimum) > 1e-9 * std::max(1.0, std::abs(tables.optimum))) {
        throw std::logic_error("reconstructed sequence does not attain the table optimum");
    }
    return out;
}

}  // namespace

int TreeDecomposition::width() const noexcept {
    int w = -1;
    for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
    return w;
}

DecompositionReport validate_decomposition(const InfluenceNetwork& net, const TreeDecomposition& td) {
    DecompositionReport report;
    auto& bad = report.violations;
    const std::size_t n = net.size();
    const std::size_t count = td.bags.size();
    report.width = td.width();
    if (count == 0) {
        if (n > 0) bad.push_back("decomposition has no bags");
        return report;
    }
    if (td.root >= count) bad.push_back("root " + std::to_string(td.root) + " is not a bag");

    for (std::size_t t = 0; t < count; ++t) {
        auto sorted = td.bags[t];
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            bad.push_back("bag " + std::to_string(t) + " repeats a node");
        }
        for (NodeId v : sorted) {
            if (v >= n) bad.push_back("bag " + std::to_string(t) + " holds unknown node " + std::to_string(v));
        }
    }

    std::vector<std::vector<std::size_t>> adj(count);
    bool edges_ok = true;
    for (auto [a, b] : td.edges) {
        if (a >= count || b >= count || a == b) {
            bad.push_back("tree edge (" + std::to_string(a) + "," + std::to_string(b) + ") is invalid");
            edges_ok = false;
            continue;
        }
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    if (td.edges.size() + 1 != count) bad.push_back("bag graph has " + std::to_string(td.edges.size()) +
                                                    " edges, a tree on " + std::to_string(count) + " bags needs " +
                                                    std::to_string(count - 1));
    if (edges_ok && td.root < count) {
        std::vector<char> seen(count, 0);
        std::deque<std::size_t> queue{td.root};
        seen[td.root] = 1;
        while (!queue.empty()) {
            const std::size_t t = queue.front();
            queue.pop_front();
            for (std::size_t u : adj[t]) {
                if (!seen[u]) {
                    seen[u] = 1;
                    queue.push_back(u);
                }
            }
        }
        if (std::count(seen.begin(), seen.end(), 1) != static_cast<std::ptrdiff_t>(count)) {
            bad.push_back("bag graph is not connected");
        }
    }
    if (!bad.empty()) return report;

    std::vector<std::vector<std::size_t>> holding(n);
    std::vector<NodeSet> members(count, NodeSet(n));
    for (std::size_t t = 0; t < count; ++t) {
        for (NodeId v : td.bags[t]) {
            holding[v].push_back(t);
            members[t].insert(v);
        }
    }
    for (NodeId v = 0; v < n; ++v) {
        if (holding[v].empty()) bad.push_back("node " + std::to_string(v) + " is in no bag");
    }
    for (const Edge& e : net.edges()) {
        if (e.u == e.v) continue;
        bool covered = std::any_of(holding[e.u].begin(), holding[e.u].end(),
                                   [&](std::size_t t) { return members[t].contains(e.v); });
        if (!covered) {
            bad.push_back("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} is in no bag");
        }
    }
    for (NodeId v = 0; v < n; ++v) {
        if (holding[v].size() < 2) continue;
        std::vector<char> seen(count, 0);
        std::deque<std::size_t> queue{holding[v].front()};
        seen[holding[v].front()] = 1;
        std::size_t reached = 1;
        while (!queue.empty()) {
            const std::size_t t = queue.front();
            queue.pop_front();
            for (std::size_t u : adj[t]) {
                if (!seen[u] && members[u].contains(v)) {
                    seen[u] = 1;
                    ++reached;
                    queue.push_back(u);
                }
            }
        }
        if (reached != holding[v].size()) {
            bad.push_back("bags holding node " + std::to_string(v) + " are not connected");
        }
    }
    return report;
}

TreeDecomposition min_fill_decomposition(const InfluenceNetwork& net) {
    const std::size_t n = net.size();
    TreeDecomposition td;
    if (n == 0) return td;
    std::vector<std::set<NodeId>> adj(n);
    for (const Edge& e : net.edges()) {
        if (e.u == e.v) continue;
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    std::vector<char> gone(n, 0);
    std::vector<std::size_t> position(n, 0);
    std::vector<NodeId> order;
    std::vector<std::vector<NodeId>> later(n);

    auto fill_in = [&](NodeId v) {
        std::size_t fill = 0;
        for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
            for (auto b = std::next(a); b != adj[v].end(); ++b) {
                if (adj[*a].count(*b) == 0) ++fill;
            }
        }
        return fill;
    };

    for (std::size_t step = 0; step < n; ++step) {
        NodeId pick = 0;
        std::size_t best_fill = 0;
        std::size_t best_degree = 0;
        bool found = false;
        for (NodeId v = 0; v < n; ++v) {
            if (gone[v]) continue;
            const std::size_t fill = fill_in(v);
            const std::size_t degree = adj[v].size();
            if (!found || fill < best_fill || (fill == best_fill && degree < best_degree)) {
                pick = v;
                best_fill = fill;
                best_degree = degree;
                found = true;
            }
        }
        later[pick].assign(adj[pick].begin(), adj[pick].end());
        for (auto a = adj[pick].begin(); a != adj[pick].end(); ++a) {
            for (auto b = std::next(a); b != adj[pick].end(); ++b) {
                adj[*a].insert(*b);
                adj[*b].insert(*a);
            }
        }
        for (NodeId u : adj[pick]) adj[u].erase(pick);
        adj[pick].clear();
        gone[pick] = 1;
        position[pick] = step;
        order.push_back(pick);
    }

    // Bag i belongs to the i-th eliminated node.
    td.bags.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const NodeId v = order[i];
        td.bags[i].push_back(v);
        td.bags[i].insert(td.bags[i].end(), later[v].begin(), later[v].end());
        std::sort(td.bags[i].begin(), td.bags[i].end());
    }
    td.root = n - 1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const NodeId v = order[i];
        std::size_t parent = n - 1;
        if (!later[v].empty()) {
            parent = position[*std::min_element(later[v].begin(), later[v].end(), [&](NodeId a, NodeId b) {
                return position[a] < position[b];
            })];
        }
        td.edges.emplace_back(parent, i);
    }
    return td;
}

RootedTree root_tree(const TreeDecomposition& td) {
    const std::size_t count = td.bags.size();
    RootedTree tree;
    tree.parent.assign(count, RootedTree::npos);
    tree.children.assign(count, {});
    if (count == 0) return tree;
    std::vector<std::vector<std::size_t>> adj(count);
    for (auto [a, b] : td.edges) {
        adj.at(a).push_back(b);
        adj.at(b).push_back(a);
    }
    std::vector<char> seen(count, 0);
    std::deque<std::size_t> queue{td.root};
    seen.at(td.root) = 1;
    while (!queue.empty()) {
        const std::size_t t = queue.front();
        queue.pop_front();
        tree.top_down.push_back(t);
        for (std::size_t u : adj[t]) {
            if (seen[u]) continue;
            seen[u] = 1;
            tree.parent[u] = t;
            tree.children[t].push_back(u);
            queue.push_back(u);
        }
    }
    return tree;
}

bool compatible(std::span<const NodeId> a, std::span<const NodeId> b) {
    std::vector<NodeId> pa;
    std::vector<NodeId> pb;
    for (NodeId v : a) {
        if (std::find(b.begin(), b.end(), v) != b.end()) pa.push_back(v);
    }
    for (NodeId v : b) {
        if (std::find(a.begin(), a.end(), v) != a.end()) pb.push_back(v);
    }
    return pa == pb;
}

bool compatible(std::span<const NodeId> a, std::span<const NodeId> ground_a, std::span<const NodeId> b,
                std::span<const NodeId> ground_b) {
    auto holds = [](std::span<const NodeId> s, NodeId v) { return std::find(s.begin(), s.end(), v) != s.end(); };
    for (NodeId v : a) {
        if (holds(ground_b, v) && !holds(b, v)) return false;
    }
    for (NodeId v : b) {
        if (holds(ground_a, v) && !holds(a, v)) return false;
    }
    return compatible(a, b);
}

std::vector<NodeId> closed_bag(const InfluenceNetwork& net, std::span<const NodeId> bag) {
    std::vector<NodeId> out(bag.begin(), bag.end());
    for (NodeId v : bag) {
        for (const Arc& a : net.neighbors(v)) out.push_back(a.node);
    }
    return sorted_unique(out);
}

AdmissibleSet enumerate_admissible(const DiffusionInstance& instance, std::span<const NodeId> bag,
                                   std::span<const AdmissibleSet> children, DiffusionMode mode,
                                   const TreewidthOptions& options) {
    const auto sorted_bag = sorted_unique(bag);
    AdmissibleSet out;
    out.ground = closed_bag(instance.network, sorted_bag);
    check_ground_size(out.ground.size(), options);

    std::vector<std::unordered_set<Key>> key_sets(children.size());
    std::vector<ChildFilter> filters;
    for (std::size_t i = 0; i < children.size(); ++i) {
        const auto child_ground = sorted_unique(children[i].ground);
        const auto shared = intersect(out.ground, child_ground);
        const auto child_shared = shared_positions(child_ground, shared);
        for (const auto& seq : children[i].orderings) {
            std::vector<std::uint8_t> cells;
            for (NodeId v : seq) {
                cells.push_back(static_cast<std::uint8_t>(
                    std::lower_bound(child_ground.begin(), child_ground.end(), v) - child_ground.begin()));
            }
            key_sets[i].insert(projection_key(cells, cells.size(), child_shared));
        }
        filters.push_back({shared_positions(out.ground, shared), &key_sets[i]});
    }
    Orderings ord = Enumerator(instance, sorted_bag, out.ground, mode, filters).run();
    for (std::size_t r = 0; r < ord.lengths.size(); ++r) {
        ActivationSequence seq;
        for (std::size_t p = 0; p < ord.lengths[r]; ++p) seq.push_back(out.ground[ord.cells[r * ord.stride + p]]);
        out.orderings.push_back(std::move(seq));
    }
    return out;
}

ActivationSequence BagTable::ordering(std::size_t r) const {
    ActivationSequence out;
    for (std::size_t p = 0; p < lengths.at(r); ++p) out.push_back(ground[cells[r * ordering_length_stride + p]]);
    return out;
}

TreewidthTables build_tables(const DiffusionInstance& instance, const TreeDecomposition& td, DiffusionMode mode,
                             const TreewidthOptions& options) {
    return TableBuilder(instance, td, mode, options).build();
}

SolveResult tw_full_optimal(const DiffusionInstance& instance, const TreeDecomposition& td,
                            const TreewidthOptions& options) {
    return solve(instance, td, DiffusionMode::Full, options);
}

SolveResult tw_partial_optimal(const DiffusionInstance& instance, const TreeDecomposition& td,
                               const TreewidthOptions& options) {
    return solve(instance, td, DiffusionMode::Partial, options);
}

}  // namespace sdiff
