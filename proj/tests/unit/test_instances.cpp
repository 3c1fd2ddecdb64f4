#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "smcensus/errors.hpp"
#include "smcensus/instances.hpp"
#include "smcensus/rng.hpp"

using namespace smcensus;

namespace {

bool is_permutation_row(const std::vector<int>& row, int n) {
    std::vector<int> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> iota(static_cast<std::size_t>(n));
    std::iota(iota.begin(), iota.end(), 0);
    return sorted == iota;
}

} // namespace

// Reference outputs of splitmix64 from state 0.
TEST(Rng, SplitMixReferenceVector) {
    std::uint64_t state = 0;
    EXPECT_EQ(splitmix64(state), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(splitmix64(state), 0x6E789E6AA1B965F4ULL);
    EXPECT_EQ(splitmix64(state), 0x06C45D188009454FULL);
}

TEST(Rng, SameSeedSameStream) {
    Rng a(123), b(123), c(124);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        EXPECT_EQ(x, b.next());
        differs = differs || x != c.next();
    }
    EXPECT_TRUE(differs);
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
    Rng rng(7);
    std::vector<int> seen(6, 0);
    for (int i = 0; i < 6000; ++i) {
        const auto v = rng.below(6);
        ASSERT_LT(v, 6u);
        ++seen[v];
    }
    for (int count : seen) EXPECT_GT(count, 800);
}

TEST(Rng, SplitStreamsDiffer) {
    Rng rng(5);
    EXPECT_NE(rng.split(0).next(), rng.split(1).next());
    EXPECT_EQ(rng.split(3).next(), Rng(Rng::derive_seed(5, 3)).next());
}

TEST(Rng, ProbabilityThreshold) {
    EXPECT_EQ(probability_threshold(0.0), 0u);
    EXPECT_EQ(probability_threshold(0.5), std::uint64_t{1} << 63);
    EXPECT_EQ(probability_threshold(1.0), ~std::uint64_t{0});
}

TEST(Instances, I2Fixture) {
    const auto p = instance_I2();
    EXPECT_EQ(p.n(), 2);
    EXPECT_EQ(p.job_prefs(), (PreferenceRows{{0, 1}, {1, 0}}));
    EXPECT_EQ(p.applicant_prefs(), (PreferenceRows{{1, 0}, {0, 1}}));
    EXPECT_TRUE(p.job_prefers(0, 0, 1));
    EXPECT_TRUE(p.applicant_prefers(0, 1, 0));
    EXPECT_EQ(p.job_rank(1, 0), 1);
}

TEST(Instances, ParseSerializeRoundTrip) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const int n = 1 + static_cast<int>(seed % 10);
        const auto p = random_instance(n, seed);
        ASSERT_EQ(p.n(), n);
        for (int u = 0; u < n; ++u) {
            ASSERT_TRUE(is_permutation_row(p.job_prefs()[static_cast<std::size_t>(u)], n));
            ASSERT_TRUE(is_permutation_row(p.applicant_prefs()[static_cast<std::size_t>(u)], n));
        }
        EXPECT_EQ(parse_instance(serialize_instance(p)), p) << "seed " << seed;
    }
}

TEST(Instances, RandomInstanceIsDeterministic) {
    EXPECT_EQ(random_instance(8, 99), random_instance(8, 99));
    EXPECT_FALSE(random_instance(8, 99) == random_instance(8, 100));
}

TEST(Instances, ParsesFixtureText) {
    const auto p = parse_instance(std::string(R"({"n":2,"job_prefs":[[0,1],[1,0]],"applicant_prefs":[[1,0],[0,1]]})"));
    EXPECT_EQ(p, instance_I2());
}

TEST(Instances, RejectsMalformedInput) {
    const std::vector<std::string> bad = {
        "not json",
        R"({"n":2,"job_prefs":[[0,1],[1,0]]})",
        R"({"n":2,"job_prefs":[[0,0],[1,0]],"applicant_prefs":[[1,0],[0,1]]})",
        R"({"n":2,"job_prefs":[[0,1],[1,2]],"applicant_prefs":[[1,0],[0,1]]})",
        R"({"n":2,"job_prefs":[[0,1]],"applicant_prefs":[[1,0],[0,1]]})",
        R"({"n":3,"job_prefs":[[0,1],[1,0]],"applicant_prefs":[[1,0],[0,1]]})",
        R"({"n":2,"job_prefs":[[0,1],[1]],"applicant_prefs":[[1,0],[0,1]]})",
        R"({"n":0,"job_prefs":[],"applicant_prefs":[]})",
        R"({"n":2,"job_prefs":[["a","b"],[1,0]],"applicant_prefs":[[1,0],[0,1]]})",
    };
    for (const auto& text : bad) EXPECT_THROW(parse_instance(text), InvalidArgument) << text;
}

TEST(Instances, ConstructorRejectsTies) {
    EXPECT_THROW(PreferenceProfile({{0, 0}, {0, 1}}, {{0, 1}, {0, 1}}), InvalidArgument);
}
