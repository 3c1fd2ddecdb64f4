#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "smcensus/bignum.hpp"
#include "smcensus/tangled_grid.hpp"

namespace smcensus {

struct Pmf {
    std::vector<std::pair<int, BigRational>> support;  // (k, Pr[= k]), k increasing

    BigRational total() const;
    BigRational at(int k) const;
    BigRational cdf(int k) const;  // Pr[<= k]
    BigRational mean() const;
};

// Cyclic-gap variable on n + 1 points: Pr[N_l = k] = k C(n-k, l-2) / C(n+1, l),
// k = 1..n. Throws InvalidArgument unless 2 <= l <= n.
Pmf nl_pmf(int n, int l);

struct NlExpectations {
    BigRational mean;               // E[N_l]
    BigRational mean_t_unchosen;    // E[N_l | t is not one of the a_j]
    BigRational mean_t_chosen;      // E[N_l | t = a_j for some j]
    BigRational claimed_bound;      // 2(n+1)/(l+1)
    bool within_bound = false;      // mean <= claimed_bound
};

// Conditional parts come from the split of k C(n-k, l-2): t chosen accounts
// for C(n-k, l-2) of the subsets with gap k, t unchosen for (k-1) C(n-k, l-2).
NlExpectations nl_expectation(int n, int l);

enum class NxVariant { section3, section4 };
std::string to_string(NxVariant variant);
NxVariant parse_nx_variant(const std::string& name);

// section3: k x^2 (1-x)^(k-1), k >= 1.
// section4, with q = 1 - x:
//   k = 1:  x + q (1 - q^2)^2
//   k = 2:  2 q^3 (1 - q^2)^2
//   k = 3:  q^5 (1 - q^2)^2 + 2 q^5 (1 - q^2) x
//   k >= 4: 2 q^(k+2) (1 - q^2) x + 2 q^(k+3) (1 - q^2) x + (k-4) q^(k+4) x^2
// Throws InvalidArgument unless 0 < x < 1 and k >= 1.
BigRational nx_pmf(const BigRational& x, int k, NxVariant variant);
double nx_pmf(double x, int k, NxVariant variant);

// sum_{k > K} pmf(x, k) in closed form (K >= 4 for section4).
BigRational nx_tail(const BigRational& x, int K, NxVariant variant);

// sum_{k <= K} pmf + nx_tail; equal to 1 exactly.
BigRational nx_total(const BigRational& x, int K, NxVariant variant);

double nx_cdf(double x, int k, NxVariant variant);

// Integer offsets 0 .. n on a cycle of n + 1 points with t at 0.
std::vector<int> sample_nl(int n, int l, std::size_t count, std::uint64_t seed);

struct NxSamples {
    std::vector<int> values;
    int window = 0;  // A is simulated on [-window, window]
};

// Bernoulli(x) points on the integer line, truncated at ceil(40 / x).
NxSamples sample_nx(double x, NxVariant variant, std::size_t count, std::uint64_t seed);

struct DominanceReport {
    bool pass = true;
    std::size_t cases = 0;  // (member, chain, l) triples checked
    std::vector<std::string> witnesses;
};

// For chain i (0..n-1 m-chains, n..2n-1 w-chains of the downset family) and
// every downset s: the exact law of X_i(s, pi) given that l chains of the
// other side precede i under a uniform pi, compared pointwise with N_l:
// Pr[X <= k] >= Pr[N_l <= k] for every k. Exhaustive over prefix sets.
// Throws CapExceeded for grids with n > 5.
DominanceReport dominance_check(const TangledGrid& grid, int chain, int l);

// Every chain and every l in [2, n].
DominanceReport dominance_check(const TangledGrid& grid);

struct JensenCheck {
    double lhs = 0;
    double rhs = 0;
    bool pass = false;  // lhs >= rhs - 1e-12
};

// Two-variable Jensen step: lhs is E[log(a0 + X1 + X2)] for independent X1, X2,
// rhs the same with X1 = 0 iff X2 = 0. Throws InvalidArgument for a_j <= 0 or
// x outside [0, 1].
JensenCheck jensen_pair_check(const BigRational& a0, const BigRational& a1, const BigRational& a2, const BigRational& x);

// Identified pairs of offsets in {-1, 0, 1, 2}; identified offsets enter B
// together. Adjacent offsets must stay independent.
using DependencyPattern = std::vector<std::pair<int, int>>;

// The five patterns allowed by the adjacency rule: none, {-1,1}, {0,2},
// {-1,2}, {-1,1} with {0,2}.
std::vector<DependencyPattern> legal_dependency_patterns();
std::string to_string(const DependencyPattern& pattern);

struct NxPrimeCheck {
    double e_log_prime = 0;
    double se_prime = 0;
    double e_log = 0;
    double se = 0;
    std::size_t samples = 0;
    bool pass = false;  // e_log_prime <= e_log + 4 sqrt(se^2 + se_prime^2)
};

// Monte Carlo on independent streams. Throws InvalidArgument for offsets
// outside {-1..2} or a pattern that ties two adjacent offsets together.
NxPrimeCheck nx_prime_check(double x, const DependencyPattern& pattern, std::size_t samples, std::uint64_t seed);

struct ChainSimulation {
    int n = 0;
    int l = 0;
    double x = 0;
    std::size_t samples = 0;
    std::vector<double> empirical_cdf;  // Pr[X <= k], k = 1..
    std::vector<double> nx_cdf;         // section4 Pr[N_x <= k]
    double worst_gap = 0;               // max_k Pr[N_x <= k] - Pr[X <= k]
    bool pass = false;                  // worst_gap <= slack
};

inline constexpr double kChainSimulationSlack = 0.02;

// Idealised reveal process on one m-chain of length n - 1 whose top sits in
// the middle: consecutive elements paired with one w-chain each, four distinct
// extra m-chains through the elements at offsets -1..2. Conditions on l
// preceding w-chains and compares the number of options with N_x, x = l / n.
ChainSimulation simulate_chain_domination(int n, int l, std::size_t samples, std::uint64_t seed,
                                          double slack = kChainSimulationSlack);

} // namespace smcensus
