#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "smcensus/errors.hpp"
#include "smcensus/rotations.hpp"

using namespace smcensus;

TEST(Rotations, CanonicalForm) {
    const Rotation r({{2, 0}, {0, 1}, {1, 2}});
    EXPECT_EQ(r.edges().front().job, 0);
    EXPECT_EQ(r, Rotation({{0, 1}, {1, 2}, {2, 0}}));
    EXPECT_THROW(Rotation({{0, 1}}), InvalidArgument);
    EXPECT_THROW(Rotation({{0, 1}, {0, 2}}), InvalidArgument);
    EXPECT_THROW(Rotation({{0, 1}, {1, 1}}), InvalidArgument);
}

TEST(Rotations, I2ExposedAndEliminated) {
    const auto p = instance_I2();
    const auto exposed = exposed_rotations(p, Matching({0, 1}));
    ASSERT_EQ(exposed.size(), 1u);
    EXPECT_EQ(exposed[0], Rotation({{0, 0}, {1, 1}}));
    EXPECT_TRUE(exposed_rotations(p, Matching({1, 0})).empty());
    EXPECT_EQ(eliminate(p, Matching({0, 1}), exposed[0]), Matching({1, 0}));
    EXPECT_THROW(eliminate(p, Matching({1, 0}), exposed[0]), InvalidArgument);
    EXPECT_TRUE(exposed_rotations(random_instance(1, 0), Matching({0})).empty());
}

TEST(Rotations, ExposedRequiresStable) {
    const PreferenceProfile same({{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
    EXPECT_THROW(exposed_rotations(same, Matching({1, 0})), InvalidArgument);
}

TEST(Rotations, EliminationKeepsStability) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const int n = 2 + static_cast<int>(seed % 5);
        const auto p = random_instance(n, seed);
        std::set<Matching> seen;
        std::vector<Matching> stack{gale_shapley(p, Side::jobs)};
        while (!stack.empty()) {
            const auto m = stack.back();
            stack.pop_back();
            if (!seen.insert(m).second) continue;
            for (const auto& r : exposed_rotations(p, m)) {
                const auto next = eliminate(p, m, r);
                ASSERT_TRUE(is_stable(p, next)) << "seed " << seed;
                stack.push_back(next);
            }
        }
        // every stable matching is reached from the job-optimal one
        EXPECT_EQ(seen.size(), enumerate_stable_bruteforce(p).size());
    }
}

TEST(Rotations, PosetFixtures) {
    const auto one = build_rotation_poset(random_instance(1, 3));
    EXPECT_EQ(one.size(), 0);
    const auto i2 = build_rotation_poset(instance_I2());
    EXPECT_EQ(i2.size(), 1);
    EXPECT_EQ(count_downsets(i2.as_finite_poset()), 2);
    EXPECT_TRUE(check_structure(i2).all_pass());
    EXPECT_EQ(enumerate_stable_via_rotations(instance_I2()),
              (std::vector<Matching>{Matching({0, 1}), Matching({1, 0})}));
    EXPECT_EQ(enumerate_stable_via_rotations(random_instance(1, 3)).size(), 1u);

    const auto p = random_instance(6, 5);
    EXPECT_EQ(count_downsets(build_rotation_poset(p).as_finite_poset()),
              BigInt(static_cast<unsigned long>(enumerate_stable_bruteforce(p).size())));
}

TEST(Rotations, BijectionAndStructureOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = 2 + static_cast<int>(seed % 6);
        const auto p = random_instance(n, seed);
        const auto poset = build_rotation_poset(p);
        const auto brute = enumerate_stable_bruteforce(p);
        EXPECT_EQ(matchings_from_downsets(p, poset), brute) << "seed " << seed;
        EXPECT_EQ(count_downsets(poset.as_finite_poset()), BigInt(static_cast<unsigned long>(brute.size())));
        EXPECT_EQ(poset.lattice_states, brute.size());
        const auto report = check_structure(poset);
        for (const auto& c : report.checks) EXPECT_TRUE(c.pass) << "seed " << seed << ' ' << c.id;
        for (const auto& chain : poset.m_chains) EXPECT_LE(static_cast<int>(chain.size()), n - 1);
    }
}

TEST(Rotations, StructureFlagsSharedEdge) {
    RotationPoset bad;
    bad.n = 3;
    bad.base = Matching({0, 1, 2});
    bad.elements = {Rotation({{0, 0}, {1, 1}}), Rotation({{0, 0}, {2, 2}})};
    bad.leq = {{1, 1}, {0, 1}};
    bad.m_chains = {{0, 1}, {0}, {1}};
    bad.w_chains = {{0, 1}, {0}, {1}};
    const auto report = check_structure(bad);
    const auto* edge = report.find("edge_in_at_most_one_rotation");
    ASSERT_NE(edge, nullptr);
    EXPECT_FALSE(edge->pass);
    EXPECT_FALSE(edge->witnesses.empty());
    EXPECT_FALSE(report.all_pass());
}

TEST(Rotations, StateCap) {
    const auto p = random_instance(7, 1);
    ASSERT_GT(enumerate_stable_bruteforce(p).size(), 1u);
    EXPECT_THROW(build_rotation_poset(p, 1), CapExceeded);
}
