#include "smcensus/poset.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <string>
#include <unordered_map>

#include "smcensus/errors.hpp"

namespace smcensus {

FinitePoset::FinitePoset(int size, std::vector<std::pair<int, int>> covers) : size_(size), covers_(std::move(covers)) {
    if (size_ < 0) throw InvalidArgument("poset size must be non-negative");
    const auto n = static_cast<std::size_t>(size_);
    lower_.assign(n, {});
    upper_.assign(n, {});
    std::sort(covers_.begin(), covers_.end());
    if (std::adjacent_find(covers_.begin(), covers_.end()) != covers_.end())
        throw InvalidArgument("duplicate cover pair");
    for (const auto& [a, b] : covers_) {
        if (a < 0 || b < 0 || a >= size_ || b >= size_)
            throw InvalidArgument("cover pair (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range");
        if (a == b) throw InvalidArgument("cover pair on a single element " + std::to_string(a));
        upper_[static_cast<std::size_t>(a)].push_back(b);
        lower_[static_cast<std::size_t>(b)].push_back(a);
    }

    // Kahn's algorithm, smallest index first.
    std::vector<int> indegree(n);
    for (std::size_t x = 0; x < n; ++x) indegree[x] = static_cast<int>(lower_[x].size());
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int x = 0; x < size_; ++x)
        if (indegree[static_cast<std::size_t>(x)] == 0) ready.push(x);
    while (!ready.empty()) {
        const int x = ready.top();
        ready.pop();
        linear_.push_back(x);
        for (int y : upper_[static_cast<std::size_t>(x)])
            if (--indegree[static_cast<std::size_t>(y)] == 0) ready.push(y);
    }
    if (linear_.size() != n) throw InvalidArgument("cover relation contains a cycle");

    less_.assign(n, std::vector<char>(n, 0));
    for (int x : linear_) {
        for (int y : lower_[static_cast<std::size_t>(x)]) {
            less_[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = 1;
            for (std::size_t z = 0; z < n; ++z)
                if (less_[z][static_cast<std::size_t>(y)]) less_[z][static_cast<std::size_t>(x)] = 1;
        }
    }
    for (const auto& [a, b] : covers_) {
        for (int c : lower_[static_cast<std::size_t>(b)]) {
            if (c != a && less(a, c))
                throw InvalidArgument("cover pair (" + std::to_string(a) + ", " + std::to_string(b) +
                                      ") is implied by transitivity");
        }
    }
}

FinitePoset FinitePoset::from_relation(const Relation& leq) {
    const auto n = leq.size();
    for (const auto& row : leq)
        if (row.size() != n) throw InvalidArgument("relation matrix is not square");
    auto lt = [&](std::size_t a, std::size_t b) { return a != b && leq[a][b] != 0; };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (lt(a, b) && lt(b, a)) throw InvalidArgument("relation is not antisymmetric");
            if (!lt(a, b)) continue;
            for (std::size_t c = 0; c < n; ++c)
                if (lt(b, c) && !lt(a, c)) throw InvalidArgument("relation is not transitive");
        }
    std::vector<std::pair<int, int>> covers;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (!lt(a, b)) continue;
            bool cover = true;
            for (std::size_t c = 0; c < n && cover; ++c)
                if (lt(a, c) && lt(c, b)) cover = false;
            if (cover) covers.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    return FinitePoset(static_cast<int>(n), std::move(covers));
}

bool FinitePoset::is_downset(const std::vector<char>& members) const {
    if (members.size() != static_cast<std::size_t>(size_)) return false;
    for (const auto& [a, b] : covers_)
        if (members[static_cast<std::size_t>(b)] && !members[static_cast<std::size_t>(a)]) return false;
    return true;
}

FinitePoset FinitePoset::induced(const std::vector<int>& elements) const {
    const auto k = elements.size();
    Relation rel(k, std::vector<char>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) rel[i][j] = leq(elements[i], elements[j]) ? 1 : 0;
    return from_relation(rel);
}

namespace {

using Mask = std::uint64_t;
using Count = unsigned __int128;

class IdealCounter {
public:
    explicit IdealCounter(const FinitePoset& poset) : size_(poset.size()) {
        for (int x = 0; x < size_; ++x) {
            Mask up = Mask{1} << x;
            Mask down = Mask{1} << x;
            for (int y = 0; y < size_; ++y) {
                if (poset.less(x, y)) up |= Mask{1} << y;
                if (poset.less(y, x)) down |= Mask{1} << y;
            }
            up_.push_back(up);
            down_.push_back(down);
        }
    }

    Count count(Mask set) {
        if (set == 0) return 1;
        if (std::has_single_bit(set)) return 2;
        if (auto it = memo_.find(set); it != memo_.end()) return it->second;

        const Mask first = component_of(set);
        Count result;
        if (first != set) {
            result = count(first) * count(set & ~first);
        } else {
            const int pivot = best_pivot(set);
            result = count(set & ~up_[static_cast<std::size_t>(pivot)]) +
                     count(set & ~down_[static_cast<std::size_t>(pivot)]);
        }
        memo_.emplace(set, result);
        return result;
    }

private:
    // Connected component (comparability graph) of the lowest element of `set`.
    Mask component_of(Mask set) const {
        Mask comp = set & (~set + 1);
        Mask frontier = comp;
        while (frontier) {
            Mask grow = 0;
            for (Mask f = frontier; f; f &= f - 1) {
                const auto x = static_cast<std::size_t>(std::countr_zero(f));
                grow |= (up_[x] | down_[x]) & set;
            }
            frontier = grow & ~comp;
            comp |= grow;
        }
        return comp;
    }

    // Element comparable to the most others in `set`; splits the set evenly-ish.
    int best_pivot(Mask set) const {
        int best = -1;
        int best_score = -1;
        for (Mask s = set; s; s &= s - 1) {
            const int x = std::countr_zero(s);
            const int up = std::popcount(up_[static_cast<std::size_t>(x)] & set);
            const int down = std::popcount(down_[static_cast<std::size_t>(x)] & set);
            const int score = std::min(up, down) * 64 + up + down;
            if (score > best_score) {
                best_score = score;
                best = x;
            }
        }
        return best;
    }

    int size_;
    std::vector<Mask> up_;
    std::vector<Mask> down_;
    std::unordered_map<Mask, Count> memo_;
};

BigInt to_bigint(Count c) {
    BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(c >> 64)));
    BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(c)));
    return (hi << 64) + lo;
}

} // namespace

BigInt count_downsets(const FinitePoset& poset, int cap) {
    const int limit = std::min(cap, kMaxDownsetCountSize);
    if (poset.size() > limit)
        throw CapExceeded("downset counting is capped at " + std::to_string(limit) + " elements, poset has " +
                          std::to_string(poset.size()));
    if (poset.size() == 0) return BigInt(1);
    IdealCounter counter(poset);
    const Mask all = poset.size() == 64 ? ~Mask{0} : (Mask{1} << poset.size()) - 1;
    return to_bigint(counter.count(all));
}

FinitePoset chain_poset(int k) {
    std::vector<std::pair<int, int>> covers;
    for (int i = 0; i + 1 < k; ++i) covers.emplace_back(i, i + 1);
    return FinitePoset(k, std::move(covers));
}

FinitePoset antichain_poset(int k) { return FinitePoset(k, {}); }

FinitePoset product_poset(int rows, int cols) {
    std::vector<std::pair<int, int>> covers;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const int x = i * cols + j;
            if (i + 1 < rows) covers.emplace_back(x, x + cols);
            if (j + 1 < cols) covers.emplace_back(x, x + 1);
        }
    return FinitePoset(rows * cols, std::move(covers));
}

} // namespace smcensus
