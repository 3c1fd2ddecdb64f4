#pragma once

#include <cstdint>
#include <map>

#include "smcensus/bigfloat.hpp"
#include "smcensus/bignum.hpp"

namespace smcensus {

// Exact real number of the form sum_j q_j * log(m_j), q_j rational and m_j a
// positive integer. Stored over prime factors, which makes the zero test
// exact: logs of distinct primes are linearly independent over Q.
class LogSum {
public:
    LogSum() = default;

    // Adds coefficient * log(m). Throws InvalidArgument for m == 0.
    void add(const BigRational& coefficient, std::uint64_t m);

    LogSum& operator+=(const LogSum& other);
    LogSum& operator-=(const LogSum& other);
    LogSum& operator*=(const BigRational& factor);
    friend LogSum operator-(LogSum a, const LogSum& b) { return a -= b; }

    bool is_zero() const { return terms_.empty(); }
    const std::map<std::uint64_t, BigRational>& prime_coefficients() const { return terms_; }

    double to_double() const;

    // Outward-rounded enclosure at the given working precision.
    Interval enclose(mpfr_prec_t precision = kDefaultPrecision) const;

private:
    std::map<std::uint64_t, BigRational> terms_;  // prime -> coefficient, no zero entries
};

// -1, 0 or +1, decided exactly (precision is raised until the enclosure
// excludes zero, which always happens for a nonzero value).
int certified_sign(const LogSum& value);

// a <=> b as -1/0/+1, exact.
inline int certified_compare(const LogSum& a, const LogSum& b) { return certified_sign(a - b); }

} // namespace smcensus
