#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace smcensus {

using PreferenceRows = std::vector<std::vector<int>>;

// A complete n x n stable matching instance with strict preferences.
// job_prefs[u] lists applicants from most to least preferred; applicant_prefs[v]
// lists jobs likewise. Rank tables are derived on construction.
class PreferenceProfile {
public:
    // Throws InvalidArgument naming the offending side and row.
    PreferenceProfile(PreferenceRows job_prefs, PreferenceRows applicant_prefs);

    int n() const { return n_; }
    const PreferenceRows& job_prefs() const { return job_prefs_; }
    const PreferenceRows& applicant_prefs() const { return applicant_prefs_; }

    // Position of applicant v on job u's list (0 = favourite).
    int job_rank(int u, int v) const { return job_rank_[idx(u, v)]; }
    // Position of job u on applicant v's list.
    int applicant_rank(int v, int u) const { return applicant_rank_[idx(v, u)]; }

    bool job_prefers(int u, int v1, int v2) const { return job_rank(u, v1) < job_rank(u, v2); }
    bool applicant_prefers(int v, int u1, int u2) const { return applicant_rank(v, u1) < applicant_rank(v, u2); }

    friend bool operator==(const PreferenceProfile& a, const PreferenceProfile& b) {
        return a.job_prefs_ == b.job_prefs_ && a.applicant_prefs_ == b.applicant_prefs_;
    }

private:
    std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * n_ + b; }

    int n_;
    PreferenceRows job_prefs_;
    PreferenceRows applicant_prefs_;
    std::vector<int> job_rank_;
    std::vector<int> applicant_rank_;
};

PreferenceProfile parse_instance(std::istream& in);
PreferenceProfile parse_instance(const std::string& text);
std::string serialize_instance(const PreferenceProfile& profile);

// Every row an independent uniform permutation; deterministic in (n, seed).
PreferenceProfile random_instance(int n, std::uint64_t seed);

// n = 2 fixture with exactly two stable matchings.
PreferenceProfile instance_I2();

} // namespace smcensus
