#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "osculum/errors.hpp"

namespace osculum {

// Exponent vector of a monomial in p variables.
struct MultiIndex {
    std::vector<int> entries;

    int degree() const {
        int d = 0;
        for (int e : entries) d += e;
        return d;
    }
    int size() const { return static_cast<int>(entries.size()); }
    bool operator==(const MultiIndex& o) const { return entries == o.entries; }
};

// Enumeration of all multi-indices of degree <= order in p variables, in graded
// lexicographic order: ascending total degree, and within a degree descending
// lexicographic on the exponent vector, so (2,0) precedes (1,1) precedes (0,2).
// Indices of degree <= k form a prefix of the table for any k <= order, which
// makes truncation a prefix copy.
class MultiIndexTable {
public:
    MultiIndexTable(int p, int order) : p_(p), order_(order) {
        if (p < 1 || p > kMaxVars) throw DimensionMismatch("variable count out of range");
        if (order < 0) throw DimensionMismatch("negative truncation order");
        degree_offset_.assign(order + 2, 0);
        std::vector<int> cur(p, 0);
        for (int d = 0; d <= order; ++d) {
            degree_offset_[d] = indices_.size();
            emit(cur, 0, d);
        }
        degree_offset_[order + 1] = indices_.size();
        rank_.reserve(indices_.size() * 2);
        for (std::size_t r = 0; r < indices_.size(); ++r)
            rank_.emplace(pack(indices_[r].entries), static_cast<std::uint32_t>(r));
    }

    int vars() const { return p_; }
    int order() const { return order_; }
    std::size_t size() const { return indices_.size(); }
    const MultiIndex& at(std::size_t rank) const { return indices_[rank]; }
    int degree_of(std::size_t rank) const { return indices_[rank].degree(); }

    // First rank of the given total degree.
    std::size_t degree_begin(int d) const { return degree_offset_[d]; }
    std::size_t degree_end(int d) const { return degree_offset_[d + 1]; }

    std::size_t rank_of(const MultiIndex& mi) const {
        auto it = rank_.find(pack(mi.entries));
        if (it == rank_.end()) throw DimensionMismatch("multi-index outside table");
        return it->second;
    }

    // Rank of the entrywise sum, or npos when the sum exceeds the order.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t rank_of_sum(std::size_t a, std::size_t b) const {
        if (degree_of(a) + degree_of(b) > order_) return npos;
        auto it = rank_.find(pack(indices_[a].entries) + pack(indices_[b].entries));
        return it == rank_.end() ? npos : it->second;
    }

    // Shared tables: jets of equal shape reuse one table.
    static std::shared_ptr<const MultiIndexTable> get(int p, int order) {
        return std::make_shared<MultiIndexTable>(p, order);
    }

    static constexpr int kMaxVars = 9;

private:
    // 7 bits per entry suffice for any order we handle (<= 127).
    static std::uint64_t pack(const std::vector<int>& e) {
        std::uint64_t key = 0;
        for (int v : e) key = (key << 7) | static_cast<std::uint64_t>(v & 0x7f);
        return key;
    }

    void emit(std::vector<int>& cur, int pos, int remaining) {
        if (pos == p_ - 1) {
            cur[pos] = remaining;
            indices_.push_back(MultiIndex{cur});
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur[pos] = e;
            emit(cur, pos + 1, remaining - e);
        }
    }

    int p_;
    int order_;
    std::vector<MultiIndex> indices_;
    std::vector<std::size_t> degree_offset_;
    std::unordered_map<std::uint64_t, std::uint32_t> rank_;
};

} // namespace osculum
