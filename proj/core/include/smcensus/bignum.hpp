#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace smcensus {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    BigInt r;
    if (k > n) return r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline BigInt factorial(std::uint64_t n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// Canonical "p/q" (or "p" when q == 1) used in every JSON report.
inline std::string to_string(const BigRational& q) { return q.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline BigRational make_rational(std::int64_t num, std::int64_t den = 1) {
    BigRational q(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
    q.canonicalize();
    return q;
}

// Accepts "p", "p/q" and finite decimals such as "0.3".
BigRational parse_rational(const std::string& text);

} // namespace smcensus
