#pragma once

#include <compare>
#include <utility>
#include <vector>

#include "smcensus/instances.hpp"

namespace smcensus {

// Perfect matching stored as job -> applicant.
class Matching {
public:
    Matching() = default;
    // Throws InvalidArgument unless `assignment` is a permutation of 0..n-1.
    explicit Matching(std::vector<int> assignment);

    int n() const { return static_cast<int>(assignment_.size()); }
    int applicant_of(int job) const { return assignment_[static_cast<std::size_t>(job)]; }
    const std::vector<int>& assignment() const { return assignment_; }
    // applicant -> job
    std::vector<int> inverse() const;

    friend auto operator<=>(const Matching&, const Matching&) = default;

private:
    std::vector<int> assignment_;
};

enum class Side { jobs, applicants };

struct BlockingPair {
    int job;
    int applicant;
    friend auto operator<=>(const BlockingPair&, const BlockingPair&) = default;
};

// Deferred acceptance with the given side proposing. Proposals are made in
// increasing index order of free proposers; the result does not depend on it.
Matching gale_shapley(const PreferenceProfile& profile, Side proposing_side);

// All blocking pairs, ordered by (job, applicant).
std::vector<BlockingPair> unstable_pairs(const PreferenceProfile& profile, const Matching& matching);

inline bool is_stable(const PreferenceProfile& profile, const Matching& matching) {
    return unstable_pairs(profile, matching).empty();
}

inline constexpr int kDefaultBruteForceCap = 9;

// Every stable matching, in lexicographic order of the assignment vector,
// found by filtering all n! perfect matchings. Throws CapExceeded above `cap`.
std::vector<Matching> enumerate_stable_bruteforce(const PreferenceProfile& profile, int cap = kDefaultBruteForceCap);

} // namespace smcensus
