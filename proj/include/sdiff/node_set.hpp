#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace sdiff {

using NodeId = std::uint32_t;

/// Dense bitset over node ids 0..capacity-1. Hashable so it can key the
/// subset tables of the exact solvers; one word covers networks up to 64 nodes.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t capacity) : capacity_(capacity), words_((capacity + 63) / 64, 0) {}
    NodeSet(std::size_t capacity, std::initializer_list<NodeId> nodes) : NodeSet(capacity) {
        for (NodeId v : nodes) insert(v);
    }
    NodeSet(std::size_t capacity, std::span<const NodeId> nodes) : NodeSet(capacity) {
        for (NodeId v : nodes) insert(v);
    }

    std::size_t capacity() const noexcept { return capacity_; }

    bool contains(NodeId v) const noexcept {
        return v < capacity_ && ((words_[v >> 6] >> (v & 63)) & 1U) != 0;
    }
    void insert(NodeId v) { words_.at(v >> 6) |= std::uint64_t{1} << (v & 63); }
    void erase(NodeId v) { words_.at(v >> 6) &= ~(std::uint64_t{1} << (v & 63)); }

    std::size_t size() const noexcept {
        std::size_t total = 0;
        for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
        return total;
    }
    bool empty() const noexcept { return size() == 0; }

    std::vector<NodeId> to_vector() const {
        std::vector<NodeId> out;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w != 0) {
                out.push_back(static_cast<NodeId>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
                w &= w - 1;
            }
        }
        return out;
    }

    /// Low 64 bits; the full encoding when capacity <= 64.
    std::uint64_t low_word() const noexcept { return words_.empty() ? 0 : words_[0]; }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    std::size_t capacity_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace sdiff

template <>
struct std::hash<sdiff::NodeSet> {
    std::size_t operator()(const sdiff::NodeSet& s) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ s.capacity();
        for (auto w : s.words()) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};
