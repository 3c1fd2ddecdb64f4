#include "smcensus/matchings.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "smcensus/errors.hpp"

namespace smcensus {

Matching::Matching(std::vector<int> assignment) : assignment_(std::move(assignment)) {
    const auto n = assignment_.size();
    std::vector<char> seen(n, 0);
    for (int v : assignment_) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)])
            throw InvalidArgument("assignment is not a perfect matching");
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

std::vector<int> Matching::inverse() const {
    std::vector<int> inv(assignment_.size());
    for (std::size_t u = 0; u < assignment_.size(); ++u) inv[static_cast<std::size_t>(assignment_[u])] = static_cast<int>(u);
    return inv;
}

Matching gale_shapley(const PreferenceProfile& profile, Side proposing_side) {
    const int n = profile.n();
    const bool jobs_propose = proposing_side == Side::jobs;
    // Proposer p ranks receivers with `proposer_list(p)`; receiver r holds the
    // best offer so far according to its own ranking.
    auto proposer_list = [&](int p) -> const std::vector<int>& {
        return jobs_propose ? profile.job_prefs()[p] : profile.applicant_prefs()[p];
    };
    auto receiver_prefers = [&](int r, int p1, int p2) {
        return jobs_propose ? profile.applicant_prefers(r, p1, p2) : profile.job_prefers(r, p1, p2);
    };

    std::vector<int> next_choice(static_cast<std::size_t>(n), 0);
    std::vector<int> held_by(static_cast<std::size_t>(n), -1);  // receiver -> proposer
    std::vector<int> free_stack(static_cast<std::size_t>(n));
    std::iota(free_stack.rbegin(), free_stack.rend(), 0);

    while (!free_stack.empty()) {
        const int p = free_stack.back();
        free_stack.pop_back();
        const int r = proposer_list(p)[static_cast<std::size_t>(next_choice[p]++)];
        const int current = held_by[r];
        if (current < 0) {
            held_by[r] = p;
        } else if (receiver_prefers(r, p, current)) {
            held_by[r] = p;
            free_stack.push_back(current);
        } else {
            free_stack.push_back(p);
        }
    }

    std::vector<int> assignment(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        if (jobs_propose)
            assignment[static_cast<std::size_t>(held_by[r])] = r;
        else
            assignment[static_cast<std::size_t>(r)] = held_by[r];
    }
    return Matching(std::move(assignment));
}

std::vector<BlockingPair> unstable_pairs(const PreferenceProfile& profile, const Matching& matching) {
    const int n = profile.n();
    if (matching.n() != n) throw InvalidArgument("matching size does not match instance");
    const auto partner_of_applicant = matching.inverse();
    std::vector<BlockingPair> out;
    for (int u = 0; u < n; ++u) {
        const int mu_u = matching.applicant_of(u);
        for (int v = 0; v < n; ++v) {
            if (v == mu_u) continue;
            if (profile.job_prefers(u, v, mu_u) && profile.applicant_prefers(v, u, partner_of_applicant[v]))
                out.push_back({u, v});
        }
    }
    return out;
}

std::vector<Matching> enumerate_stable_bruteforce(const PreferenceProfile& profile, int cap) {
    const int n = profile.n();
    if (n > cap)
        throw CapExceeded("brute-force enumeration is capped at n = " + std::to_string(cap) + ", got n = " +
                          std::to_string(n));
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> inv(perm.size());
    std::vector<Matching> out;
    do {
        for (int u = 0; u < n; ++u) inv[static_cast<std::size_t>(perm[u])] = u;
        bool stable = true;
        for (int u = 0; u < n && stable; ++u) {
            const int mu_u = perm[u];
            // only applicants u strictly prefers can block
            for (int pos = 0; pos < profile.job_rank(u, mu_u); ++pos) {
                const int v = profile.job_prefs()[u][pos];
                if (profile.applicant_prefers(v, u, inv[v])) {
                    stable = false;
                    break;
                }
            }
        }
        if (stable) out.emplace_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace smcensus
