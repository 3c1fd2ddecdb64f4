#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "smcensus/counting_lens.hpp"
#include "smcensus/errors.hpp"
#include "smcensus/rng.hpp"

using namespace smcensus;

namespace {

// Reveal orders 123, 132, 213, 231, 312, 321 as 0-based component lists.
const std::vector<std::vector<int>> kOrders = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

std::vector<int> table_row(int shape, int N) {
    switch (shape) {
    case 0: return {N + 1, N + 1, 2, 1, N, 1};  // (i,i,0)
    case 1: return {N + 1, N + 1, N, 1, 2, 1};  // (i,0,i)
    default: return {N + 1, N + 1, 2, 1, 2, 1}; // (0,i,i)
    }
}

long brute_perfect_matchings(const BipartiteGraph& g) {
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(g.left_size),
                                       std::vector<char>(static_cast<std::size_t>(g.right_size), 0));
    for (const auto& [u, v] : g.edges) adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    std::vector<int> perm(static_cast<std::size_t>(g.left_size));
    std::iota(perm.begin(), perm.end(), 0);
    long count = 0;
    do {
        bool ok = true;
        for (std::size_t u = 0; u < perm.size() && ok; ++u) ok = adj[u][static_cast<std::size_t>(perm[u])];
        count += ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

} // namespace

TEST(CountingLens, RevealTableReproduced) {
    for (int N : {1, 2, 5, 9}) {
        const auto family = example1_family(N);
        ASSERT_EQ(family.size(), static_cast<std::size_t>(3 * N));
        for (int i = 1; i <= N; ++i) {
            const std::vector<std::vector<int>> shapes = {{i, i, 0}, {i, 0, i}, {0, i, i}};
            for (int shape = 0; shape < 3; ++shape) {
                const auto expected = table_row(shape, N);
                for (std::size_t c = 0; c < kOrders.size(); ++c) {
                    EXPECT_EQ(x_count(family, shapes[static_cast<std::size_t>(shape)], kOrders[c], 0), expected[c])
                        << "N=" << N << " shape " << shape << " column " << c;
                }
            }
        }
    }
}

TEST(CountingLens, ExampleFamilyDefinition) {
    const auto f = example1_family(1);
    EXPECT_EQ(f.members(), (std::vector<std::vector<int>>{{1, 1, 0}, {1, 0, 1}, {0, 1, 1}}));
    EXPECT_EQ(example1_family(5).size(), 15u);
    EXPECT_THROW(example1_family(0), InvalidArgument);
}

TEST(CountingLens, XCountRejectsNonMembers) {
    const auto f = example1_family(3);
    EXPECT_THROW(x_count(f, {1, 1, 1}, kOrders[0], 0), InvalidArgument);
    EXPECT_THROW(x_count(f, {1, 1, 0}, std::vector<int>{0, 0, 1}, 0), InvalidArgument);
}

TEST(CountingLens, PrefixCountsAgreeWithScan) {
    const auto f = example1_family(4);
    for (std::uint32_t mask = 0; mask < 8; ++mask)
        for (int i = 0; i < 3; ++i) {
            if (mask >> i & 1) continue;
            std::vector<int> order;
            for (int j = 0; j < 3; ++j)
                if (mask >> j & 1) order.push_back(j);
            order.push_back(i);
            for (int j = 0; j < 3; ++j)
                if (!(mask >> j & 1) && j != i) order.push_back(j);
            const auto counts = x_counts_for_prefix(f, mask, i);
            for (std::size_t k = 0; k < f.size(); ++k) EXPECT_EQ(counts[k], x_count(f, f.member(k), order, i));
        }
}

TEST(CountingLens, RevealingMoreNeverIncreasesX) {
    const auto f = example1_family(6);
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<int> order = {0, 1, 2};
        rng.shuffle(std::span<int>(order));
        const auto& s = f.member(rng.below(f.size()));
        for (std::size_t t = 0; t + 1 < order.size(); ++t) {
            const int i = order[t];
            auto later = order;
            std::swap(later[t], later[t + 1]);
            EXPECT_LE(x_count(f, s, later, i), x_count(f, s, order, i));
        }
    }
}

TEST(CountingLens, ExampleFamilyFixedOrderBound) {
    const int N = 5;
    const auto result = bound(example1_family(N),
                              {BoundVariant::fixed_perm_expect_s, PermutationDistribution::single({0, 1, 2})});
    ASSERT_TRUE(result.exact_value.has_value());
    LogSum expected;
    expected.add(1, N + 1);
    expected.add(BigRational(1, 3), N);
    expected.add(BigRational(2, 3), 2);
    EXPECT_TRUE((*result.exact_value - expected).is_zero());
    EXPECT_GE(result.value, std::log(15.0));
    EXPECT_TRUE(result.holds);
}

TEST(CountingLens, ExampleFamilyProductBound) {
    for (int N : {2, 5, 10}) {
        const auto result = bound(example1_family(N), {BoundVariant::corollary_product, PermutationDistribution::uniform()});
        ASSERT_TRUE(result.product.has_value());
        BigRational base(3 * N + 6, 6);
        base.canonicalize();
        EXPECT_EQ(*result.product, base * base * base) << N;
        EXPECT_GE(*result.product, 3 * N);
        EXPECT_TRUE(result.holds);
    }
}

TEST(CountingLens, EveryVariantBoundsLogSize) {
    const auto f = example1_family(7);
    for (auto v : {BoundVariant::expect_both, BoundVariant::max_s_expect_pi_log, BoundVariant::corollary_product}) {
        const auto exact = bound(f, {v, PermutationDistribution::uniform()});
        EXPECT_TRUE(exact.holds) << to_string(v);
        EXPECT_GE(exact.value, exact.log_size - 1e-12);
        EXPECT_NEAR(std::accumulate(exact.per_component.begin(), exact.per_component.end(), 0.0), exact.value, 1e-9);
        const auto mc = bound(f, {v, PermutationDistribution::monte_carlo(4000)}, 3);
        EXPECT_TRUE(mc.holds) << to_string(v);
        EXPECT_TRUE(mc.std_error.has_value());
        EXPECT_EQ(mc.seed, std::optional<std::uint64_t>(3));
        EXPECT_EQ(parse_bound_variant(to_string(v)), v);
    }
}

TEST(CountingLens, ExplicitPermutationWeights) {
    const auto f = example1_family(3);
    const auto half = BigRational(1, 2);
    const auto r = bound(f, {BoundVariant::expect_both, PermutationDistribution::explicit_list({{0, 1, 2}, {2, 1, 0}}, {half, half})});
    EXPECT_TRUE(r.holds);
    EXPECT_THROW(bound(f, {BoundVariant::expect_both, PermutationDistribution::explicit_list({{0, 1, 2}}, {half})}),
                 InvalidArgument);
}

TEST(CountingLens, SingletonFamilyBoundIsZero) {
    const TupleFamily single({{"a"}, {"b"}}, {{0, 0}});
    const auto r = bound(single, {BoundVariant::max_s_expect_pi_log, PermutationDistribution::uniform()});
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.log_size, 0.0);
    EXPECT_THROW(bound(TupleFamily({{"a"}}, {}), {}), InvalidArgument);
    EXPECT_THROW(TupleFamily({{"a"}}, {{0}, {0}}), InvalidArgument);
    EXPECT_THROW(TupleFamily({{"a"}}, {{1}}), InvalidArgument);
}

TEST(CountingLens, BregmanFixtures) {
    const auto k2 = bregman_check(complete_bipartite(2));
    EXPECT_EQ(k2.perfect_matchings, 2);
    EXPECT_TRUE(k2.pass);
    EXPECT_TRUE(k2.tight);
    EXPECT_EQ(matchings_family(complete_bipartite(2)).size(), 2u);

    const auto k3 = bregman_check(complete_bipartite(3));
    EXPECT_EQ(k3.perfect_matchings, 6);
    EXPECT_NEAR(k3.log_bound, std::log(6.0), 1e-12);
    EXPECT_TRUE(k3.tight);

    const BipartiteGraph matching{3, 3, {{0, 1}, {1, 2}, {2, 0}}};
    const auto one = bregman_check(matching);
    EXPECT_EQ(one.perfect_matchings, 1);
    EXPECT_EQ(one.log_bound, 0.0);
    EXPECT_TRUE(one.pass);
    EXPECT_THROW(matchings_family(BipartiteGraph{2, 3, {{0, 0}}}), InvalidArgument);
    EXPECT_THROW(validate_graph(BipartiteGraph{2, 2, {{0, 0}, {0, 0}}}), InvalidArgument);
}

TEST(CountingLens, BregmanOnRandomGraphs) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const int n = 1 + static_cast<int>(seed % 7);
        const auto g = random_bipartite(n, 0.3 + 0.1 * static_cast<double>(seed % 6), seed);
        const auto check = bregman_check(g);
        EXPECT_EQ(check.perfect_matchings, brute_perfect_matchings(g)) << "seed " << seed;
        EXPECT_TRUE(check.pass) << "seed " << seed;
        if (check.perfect_matchings > 0) {
            EXPECT_EQ(matchings_family(g).size(), check.perfect_matchings.get_ui());
        }
    }
}

TEST(CountingLens, DownsetFamilies) {
    EXPECT_EQ(downsets_family(grid_diamond(1)).size(), 2u);
    EXPECT_EQ(downsets_family(grid_diamond(2)).size(), 6u);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 2 + static_cast<int>(seed % 3);
        const auto grid = random_tangled_grid(n, seed);
        const auto family = downsets_family(grid);
        EXPECT_EQ(family.n(), 2 * n);
        EXPECT_EQ(BigInt(static_cast<unsigned long>(family.size())), count_downsets(grid.poset));
        const auto r = bound(family, {BoundVariant::max_s_expect_pi_log, PermutationDistribution::uniform()});
        EXPECT_TRUE(r.holds) << "seed " << seed;
        EXPECT_GE(r.value, r.log_size);
    }
}
