#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smcensus/bignum.hpp"
#include "smcensus/logsum.hpp"
#include "smcensus/tangled_grid.hpp"

namespace smcensus {

// S as a subset of A_1 x ... x A_n. Members store indices into the label
// lists of each component.
class TupleFamily {
public:
    TupleFamily() = default;
    // Throws InvalidArgument on an out-of-range entry, a wrong arity or a
    // repeated member.
    TupleFamily(std::vector<std::vector<std::string>> components, std::vector<std::vector<int>> members);

    int n() const { return static_cast<int>(components_.size()); }
    std::size_t size() const { return members_.size(); }
    const std::vector<std::vector<std::string>>& components() const { return components_; }
    const std::vector<std::vector<int>>& members() const { return members_; }
    const std::vector<int>& member(std::size_t k) const { return members_[k]; }

    // Position of `tuple` in members(), or nullopt.
    std::optional<std::size_t> find(const std::vector<int>& tuple) const;

private:
    std::vector<std::vector<std::string>> components_;
    std::vector<std::vector<int>> members_;
};

struct BipartiteGraph {
    int left_size = 0;
    int right_size = 0;
    std::vector<std::pair<int, int>> edges;  // (left, right)
};

// Throws InvalidArgument on non-positive sizes, endpoints out of range or a
// duplicate edge.
void validate_graph(const BipartiteGraph& graph);

// Reveal orders are 0-based: order[t] is the component revealed at step t.
// X_i(s, order) counts the distinct i-th entries among members that agree
// with s on every component revealed before i. Linear scan of S.
// Throws InvalidArgument if s is not a member or the order is not a
// permutation.
int x_count(const TupleFamily& family, const std::vector<int>& s, std::span<const int> order, int i);

// X_i for every member when exactly the components in the bit mask
// `revealed` precede i. Grouping by the revealed entries, not a rescan per member.
std::vector<int> x_counts_for_prefix(const TupleFamily& family, std::uint32_t revealed, int i);

struct PermutationDistribution {
    enum class Kind { uniform, explicit_list, single, monte_carlo };
    Kind kind = Kind::uniform;
    std::vector<std::vector<int>> orders;  // explicit_list / single
    std::vector<BigRational> weights;      // explicit_list, must sum to 1
    std::size_t samples = 0;               // monte_carlo

    static PermutationDistribution uniform() { return {}; }
    static PermutationDistribution single(std::vector<int> order);
    static PermutationDistribution explicit_list(std::vector<std::vector<int>> orders, std::vector<BigRational> weights);
    static PermutationDistribution monte_carlo(std::size_t samples);
};

enum class BoundVariant {
    fixed_perm_expect_s,   // E_s[sum_i log X_i(s, pi)] for one fixed pi
    expect_both,           // E_(s, pi)[sum_i log X_i]
    max_s_expect_pi_log,   // sum_i max_s E_pi[log X_i]
    corollary_product,     // log prod_i max_s E_pi[X_i]
};

std::string to_string(BoundVariant variant);
BoundVariant parse_bound_variant(const std::string& name);

struct BoundMode {
    BoundVariant variant = BoundVariant::max_s_expect_pi_log;
    PermutationDistribution permutations;
};

// Exact uniform averaging enumerates the 2^(n-1) prefix sets of every
// component; beyond this many components use monte_carlo.
inline constexpr int kMaxExactUniformComponents = 8;

struct BoundResult {
    BoundVariant variant{};
    bool exact = true;
    double value = 0;                    // natural-log bound on log|S|
    std::vector<double> per_component;   // sum of these is value
    double log_size = 0;                 // log|S|
    bool holds = false;                  // value >= log|S| (exactly, or within 4 standard errors)

    std::optional<LogSum> exact_value;                   // log-valued exact variants
    std::optional<BigRational> product;                  // corollary_product, exact
    std::vector<BigRational> per_component_rational;     // corollary_product, exact max_s E[X_i]

    std::optional<double> std_error;                     // monte_carlo
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
};

// Throws InvalidArgument for an empty family, a fixed-permutation variant
// without a single order, mismatched weights, or exact uniform averaging
// with more than kMaxExactUniformComponents components.
BoundResult bound(const TupleFamily& family, const BoundMode& mode, std::uint64_t seed = 0);

// {(i,i,0)} U {(i,0,i)} U {(0,i,i)}, 1 <= i <= N, over {0..N}^3; 3N members.
TupleFamily example1_family(int N);

// Components are the edge sets at each right vertex, members the perfect
// matchings. Throws InvalidArgument if the sides differ or exceed 8.
TupleFamily matchings_family(const BipartiteGraph& graph);

// Components are the n m-chains and then the n w-chains, each extended by
// a sentinel at index 0 (a0 for m-chains, b0 for w-chains); entry k > 0 is
// the k-th chain element from the bottom. Each downset D becomes
// (top_D(M_1), ..., top_D(W_n)).
inline constexpr std::size_t kDefaultFamilyCap = 1'000'000;
TupleFamily downsets_family(const TangledGrid& grid, std::size_t member_cap = kDefaultFamilyCap);

// Number of perfect matchings (subset DP over the right side, <= 20).
BigInt count_perfect_matchings(const BipartiteGraph& graph);

struct BregmanCheck {
    BigInt perfect_matchings;
    double log_bound = 0;   // sum over right vertices of log(d!)/d
    bool tight = false;     // |log perm - log_bound| <= 1e-9 relative
    bool pass = false;      // perm <= exp(log_bound) * (1 + 1e-9)
};

inline constexpr double kBregmanRelativeTolerance = 1e-9;

BregmanCheck bregman_check(const BipartiteGraph& graph);

BipartiteGraph complete_bipartite(int n);

// Each of the n*n possible edges present independently with probability p.
BipartiteGraph random_bipartite(int n, double p, std::uint64_t seed);

} // namespace smcensus
