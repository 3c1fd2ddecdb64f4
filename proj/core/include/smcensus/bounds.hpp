#pragma once

#include <cstdint>
#include <string>

#include "smcensus/bigfloat.hpp"
#include "smcensus/bignum.hpp"
#include "smcensus/distributions.hpp"

namespace smcensus {

struct WhitworthResult {
    BigRational lhs;  // sum_{j=0}^m C(m,j) / C(n,j+a)
    BigRational rhs;  // (n+1) / ((a+1) C(n-m+1, a+1))
    bool equal = false;
};

// Throws InvalidArgument unless m >= 0, a >= 0 and n >= m + a.
WhitworthResult whitworth(int m, int a, int n);

// Decimal constants the bounds are checked against.
inline constexpr const char* kTgSeriesBound = "1.2038";
inline constexpr const char* kSmSeriesBound = "0.6331";

// (2/(n+1)) log(n+1) + 2 ((n+2)/(n+1)) sum_{k=2}^n log k / ((k+1)(k+2)),
// enclosed at the given precision. Throws InvalidArgument for n < 1.
Interval finite_n_tg_term(int n, mpfr_prec_t precision = kDefaultPrecision);

struct FiniteNScan {
    int n_max = 0;
    int argmax = 0;         // n with the largest upper end
    BigFloat max_hi;        // largest upper end over 1..n_max
    bool holds = false;     // max_hi <= kTgSeriesBound
};

// Incremental scan over n = 1..n_max at 128 bits.
FiniteNScan finite_n_tg_scan(int n_max);

struct SeriesEnclosure {
    std::int64_t truncation = 0;
    BigFloat partial_lo;         // partial sum, rounded down
    BigFloat partial_hi;         // partial sum, rounded up
    BigFloat tail_hi;            // rigorous majorant of the remainder
    Interval interval;           // [partial_lo, partial_hi + tail_hi]
    BigFloat bound;              // the constant being checked, rounded down
    bool majorant_verified = false;  // term_k <= majorant_k for every k checked
    bool holds = false;              // interval.hi <= bound
};

// sum_{k>=2} 2 log k / ((k+1)(k+2)); tail 2 (log K + 1) / K.
// Throws InvalidArgument for K < 10.
SeriesEnclosure series_tg_constant(std::int64_t K);

// (log 2)/12 + (log 3) 23/630 + sum_{k>=4} log k (2k(k+7)+72) / ((k+3)(k+5)(k+6)(k+7));
// tail 4 (log K + 1) / K. Throws InvalidArgument for K < 8.
SeriesEnclosure series_sm_constant(std::int64_t K);

// Coefficient of log k in the series: integral over x in [0,1] of Pr[N_x = k].
BigRational series_coefficient(int k, NxVariant variant);

struct IntegralCheck {
    BigRational integral;     // exact integral of the expanded pmf polynomial
    BigRational closed_form;  // series_coefficient
    bool equal = false;
};

// Throws InvalidArgument for k < 1 (section3) or k < 2 (section4).
IntegralCheck integral_check(int k, NxVariant variant);

struct NormalizationCheck {
    BigRational complement;  // 1 - sum_{k>=2} Pr[N_x = k], tail in closed form
    BigRational pr_one;      // x + q (1 - q^2)^2
    bool equal = false;
};

NormalizationCheck section4_normalization(const BigRational& x);

struct BoundReport {
    int n = 0;
    std::string tg_exponential;      // e^(2.4076 n)
    std::string tg_power;            // 11.11^n
    std::string sm_exponential;      // e^(1.2662 n)
    std::string sm_exponential_alt;  // e^(1.2663 n)
    std::string sm_power;            // 3.55^n
    std::string exp_tg_base;         // e^2.4076
    std::string exp_sm_base;         // e^1.2662
    std::string exp_sm_base_alt;     // e^1.2663
    bool tg_base_holds = false;      // e^2.4076 <= 11.11
    bool sm_base_holds = false;      // e^1.2662 <= 3.55
    bool sm_base_alt_holds = false;  // e^1.2663 <= 3.55
};

// Decimals carry 12 significant digits. Throws InvalidArgument for n < 1.
BoundReport bound_report(int n);

// count <= 3.55^n and count <= 11.11^n, decided in integers.
bool within_sm_bound(const BigInt& count, int n);
bool within_tg_bound(const BigInt& count, int n);

} // namespace smcensus
