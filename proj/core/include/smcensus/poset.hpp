#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "smcensus/bignum.hpp"

namespace smcensus {

using Relation = std::vector<std::vector<char>>;

// Finite poset given by its cover (Hasse) relation. The strict order and a
// linear extension are derived on construction.
class FinitePoset {
public:
    FinitePoset() = default;

    // `covers` holds (lower, upper) pairs. Throws InvalidArgument on cycles,
    // out-of-range endpoints, duplicates, or transitive (non-cover) pairs.
    FinitePoset(int size, std::vector<std::pair<int, int>> covers);

    // From a relation where leq[a][b] != 0 means a <= b. Reflexive entries are
    // ignored; the relation must already be transitive and antisymmetric.
    static FinitePoset from_relation(const Relation& leq);

    int size() const { return size_; }
    const std::vector<std::pair<int, int>>& covers() const { return covers_; }
    const std::vector<int>& lower_covers(int x) const { return lower_[static_cast<std::size_t>(x)]; }
    const std::vector<int>& upper_covers(int x) const { return upper_[static_cast<std::size_t>(x)]; }

    bool less(int a, int b) const { return less_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0; }
    bool leq(int a, int b) const { return a == b || less(a, b); }
    bool comparable(int a, int b) const { return leq(a, b) || leq(b, a); }

    // Elements in an order compatible with the poset, ties by index.
    const std::vector<int>& linear_extension() const { return linear_; }

    bool is_downset(const std::vector<char>& members) const;

    // Poset induced on `elements` (re-indexed in the given order).
    FinitePoset induced(const std::vector<int>& elements) const;

    friend bool operator==(const FinitePoset& a, const FinitePoset& b) {
        return a.size_ == b.size_ && a.less_ == b.less_;
    }

private:
    int size_ = 0;
    std::vector<std::pair<int, int>> covers_;
    std::vector<std::vector<int>> lower_;
    std::vector<std::vector<int>> upper_;
    Relation less_;
    std::vector<int> linear_;
};

inline constexpr int kDefaultDownsetCap = 40;
inline constexpr int kMaxDownsetCountSize = 64;

// Number of downsets (order ideals), including the empty and the full set.
// Memoized recursion ideals(P) = ideals(P - up(x)) + ideals(P - down(x)) on
// induced subsets, multiplied across connected components.
// Throws CapExceeded when size() > cap (cap itself may not exceed 64).
BigInt count_downsets(const FinitePoset& poset, int cap = kDefaultDownsetCap);

// Streams every downset as a membership vector. Order is canonical: elements
// are decided along linear_extension(), "out" before "in".
template <class Visitor>
void for_each_downset(const FinitePoset& poset, Visitor&& visit) {
    const auto& order = poset.linear_extension();
    std::vector<char> in(static_cast<std::size_t>(poset.size()), 0);
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == order.size()) {
            visit(static_cast<const std::vector<char>&>(in));
            return;
        }
        const int x = order[depth];
        self(self, depth + 1);
        bool allowed = true;
        for (int y : poset.lower_covers(x))
            if (!in[static_cast<std::size_t>(y)]) {
                allowed = false;
                break;
            }
        if (allowed) {
            in[static_cast<std::size_t>(x)] = 1;
            self(self, depth + 1);
            in[static_cast<std::size_t>(x)] = 0;
        }
    };
    rec(rec, 0);
}

// Chain of k elements, antichain of k elements, and the a x b product order;
// small fixtures used by tests and benchmarks.
FinitePoset chain_poset(int k);
FinitePoset antichain_poset(int k);
FinitePoset product_poset(int rows, int cols);

} // namespace smcensus
