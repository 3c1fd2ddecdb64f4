#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "smcensus/bounds.hpp"
#include "smcensus/errors.hpp"
#include "smcensus/poset.hpp"
#include "smcensus/rng.hpp"
#include "smcensus/tangled_grid.hpp"

using namespace smcensus;

namespace {

// Random order on `size` elements: i < j added with probability p, closed
// transitively.
Relation random_relation(int size, double p, std::uint64_t seed) {
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(size);
    Relation leq(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        leq[i][i] = 1;
        for (std::size_t j = i + 1; j < n; ++j) leq[i][j] = rng.unit() < p;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (leq[i][k] && leq[k][j]) leq[i][j] = 1;
    return leq;
}

long naive_downsets(const Relation& leq) {
    const auto n = leq.size();
    long count = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (std::size_t b = 0; b < n && ok; ++b)
            if (mask >> b & 1)
                for (std::size_t a = 0; a < n; ++a)
                    if (leq[a][b] && !(mask >> a & 1)) {
                        ok = false;
                        break;
                    }
        count += ok;
    }
    return count;
}

} // namespace

TEST(Poset, SmallFixtures) {
    EXPECT_EQ(count_downsets(chain_poset(3)), 4);
    EXPECT_EQ(count_downsets(antichain_poset(3)), 8);
    EXPECT_EQ(count_downsets(product_poset(2, 2)), 6);
    EXPECT_EQ(count_downsets(FinitePoset(0, {})), 1);
}

TEST(Poset, RejectsBadCovers) {
    EXPECT_THROW(FinitePoset(2, {{0, 1}, {1, 0}}), InvalidArgument);
    EXPECT_THROW(FinitePoset(3, {{0, 1}, {1, 2}, {0, 2}}), InvalidArgument);
    EXPECT_THROW(FinitePoset(2, {{0, 2}}), InvalidArgument);
    EXPECT_THROW(FinitePoset(2, {{0, 1}, {0, 1}}), InvalidArgument);
}

TEST(Poset, CountMatchesSubsetFiltering) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const int size = 1 + static_cast<int>(seed % 16);
        const double p = 0.05 + 0.1 * static_cast<double>(seed % 5);
        const auto leq = random_relation(size, p, seed);
        const auto poset = FinitePoset::from_relation(leq);
        EXPECT_EQ(count_downsets(poset), naive_downsets(leq)) << "seed " << seed;

        long streamed = 0;
        for_each_downset(poset, [&](const std::vector<char>& in) {
            EXPECT_TRUE(poset.is_downset(in));
            ++streamed;
        });
        EXPECT_EQ(streamed, naive_downsets(leq));
    }
}

TEST(Poset, DownsetCap) {
    EXPECT_THROW(count_downsets(antichain_poset(41)), CapExceeded);
    EXPECT_EQ(count_downsets(antichain_poset(41), 64), BigInt(1) << 41);
}

TEST(Poset, InducedSubposet) {
    const auto grid = product_poset(2, 3);
    const auto sub = grid.induced({0, 1, 2});
    EXPECT_EQ(count_downsets(sub), 4);
}

TEST(TangledGrid, DiamondCountsAreCentralBinomials) {
    for (int n = 1; n <= 8; ++n) {
        const auto grid = grid_diamond(n);
        EXPECT_TRUE(is_valid_tangled_grid(grid));
        EXPECT_EQ(count_downsets(grid.poset, 64), binomial(2 * n, n)) << n;
    }
    EXPECT_THROW(grid_diamond(0), InvalidArgument);
}

TEST(TangledGrid, EmbeddingFixtures) {
    const auto one = embed_in_tangled_grid(build_rotation_poset(random_instance(1, 0)), 1);
    EXPECT_EQ(one.poset.size(), 1);
    EXPECT_EQ(count_downsets(one.poset), 2);

    const auto i2 = embed_in_tangled_grid(build_rotation_poset(instance_I2()), 2);
    EXPECT_TRUE(is_valid_tangled_grid(i2));
    EXPECT_EQ(i2.poset.size(), 4);
    EXPECT_GE(count_downsets(i2.poset), 2);
}

TEST(TangledGrid, EmbeddingOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const int n = 2 + static_cast<int>(seed % 5);
        const auto rotations = build_rotation_poset(random_instance(n, seed));
        const auto grid = embed_in_tangled_grid(rotations, n);
        ASSERT_TRUE(is_valid_tangled_grid(grid)) << "seed " << seed;
        EXPECT_EQ(grid.poset.size(), n * n);

        // rotations keep their order inside the grid
        const auto original = rotations.as_finite_poset();
        for (int a = 0; a < original.size(); ++a)
            for (int b = 0; b < original.size(); ++b) EXPECT_EQ(original.leq(a, b), grid.poset.leq(a, b));
        EXPECT_GE(count_downsets(grid.poset), count_downsets(original));
        EXPECT_TRUE(within_tg_bound(count_downsets(grid.poset), n));
    }
}

TEST(TangledGrid, ViolationsAreReported) {
    auto grid = grid_diamond(3);
    std::swap(grid.w_chains[0][0], grid.w_chains[1][0]);
    EXPECT_FALSE(is_valid_tangled_grid(grid));
    auto short_chain = grid_diamond(2);
    short_chain.m_chains[0].pop_back();
    EXPECT_FALSE(tangled_grid_violations(short_chain).empty());
}

TEST(TangledGrid, RandomGridIsDeterministic) {
    const auto a = random_tangled_grid(4, 9);
    const auto b = random_tangled_grid(4, 9);
    EXPECT_EQ(a.poset, b.poset);
    EXPECT_EQ(a.m_chains, b.m_chains);
    EXPECT_EQ(a.w_chains, b.w_chains);
    EXPECT_TRUE(is_valid_tangled_grid(a));
    EXPECT_EQ(random_tangled_grid(1, 17).poset.size(), 1);
}
