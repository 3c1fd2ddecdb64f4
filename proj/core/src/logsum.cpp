#include "smcensus/logsum.hpp"

#include <cmath>
#include <stdexcept>

#include "smcensus/errors.hpp"

namespace smcensus {

namespace {

void add_term(std::map<std::uint64_t, BigRational>& terms, std::uint64_t p, const BigRational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms.emplace(p, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

} // namespace

void LogSum::add(const BigRational& coefficient, std::uint64_t m) {
    if (m == 0) throw InvalidArgument("log of zero");
    if (coefficient == 0) return;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e) add_term(terms_, p, coefficient * e);
    }
    if (m > 1) add_term(terms_, m, coefficient);
}

LogSum& LogSum::operator+=(const LogSum& other) {
    for (const auto& [p, c] : other.terms_) add_term(terms_, p, c);
    return *this;
}

LogSum& LogSum::operator-=(const LogSum& other) {
    for (const auto& [p, c] : other.terms_) add_term(terms_, p, -c);
    return *this;
}

LogSum& LogSum::operator*=(const BigRational& factor) {
    if (factor == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [p, c] : terms_) c *= factor;
    return *this;
}

double LogSum::to_double() const {
    double sum = 0;
    for (const auto& [p, c] : terms_) sum += c.get_d() * std::log(static_cast<double>(p));
    return sum;
}

Interval LogSum::enclose(mpfr_prec_t precision) const {
    Interval out{BigFloat(0.0, precision), BigFloat(0.0, precision)};
    BigFloat log_lo(precision), log_hi(precision), t(precision);
    for (const auto& [p, c] : terms_) {
        mpfr_set_ui(log_lo.get(), p, MPFR_RNDN);  // exact: p < 2^64 fits in 200 bits, and
        mpfr_set_ui(log_hi.get(), p, MPFR_RNDN);  // in any precision >= 64 used here
        mpfr_log(log_lo.get(), log_lo.get(), MPFR_RNDD);
        mpfr_log(log_hi.get(), log_hi.get(), MPFR_RNDU);
        const BigFloat c_lo = BigFloat::from_rational(c, MPFR_RNDD, precision);
        const BigFloat c_hi = BigFloat::from_rational(c, MPFR_RNDU, precision);
        // log p > 0, so the sign of c picks the extreme endpoints
        if (c > 0) {
            mpfr_mul(t.get(), c_lo.get(), log_lo.get(), MPFR_RNDD);
            mpfr_add(out.lo.get(), out.lo.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), c_hi.get(), log_hi.get(), MPFR_RNDU);
            mpfr_add(out.hi.get(), out.hi.get(), t.get(), MPFR_RNDU);
        } else {
            mpfr_mul(t.get(), c_lo.get(), log_hi.get(), MPFR_RNDD);
            mpfr_add(out.lo.get(), out.lo.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), c_hi.get(), log_lo.get(), MPFR_RNDU);
            mpfr_add(out.hi.get(), out.hi.get(), t.get(), MPFR_RNDU);
        }
    }
    return out;
}

int certified_sign(const LogSum& value) {
    if (value.is_zero()) return 0;
    for (mpfr_prec_t precision = 64; precision <= (1 << 20); precision *= 2) {
        const Interval iv = value.enclose(precision);
        if (mpfr_sgn(iv.lo.get()) > 0) return 1;
        if (mpfr_sgn(iv.hi.get()) < 0) return -1;
    }
    throw std::logic_error("nonzero log-sum could not be separated from zero");
}

} // namespace smcensus
