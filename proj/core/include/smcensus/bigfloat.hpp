#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "smcensus/bignum.hpp"

namespace smcensus {

// 200 bits is a little over 60 significant decimal digits.
inline constexpr mpfr_prec_t kDefaultPrecision = 200;

// Owning handle for an mpfr_t. Arithmetic goes through the mpfr_* API so the
// caller always states the rounding direction.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t precision = kDefaultPrecision) {
        mpfr_init2(value_, precision);
        mpfr_set_zero(value_, 1);
    }
    BigFloat(double d, mpfr_prec_t precision = kDefaultPrecision) : BigFloat(precision) {
        mpfr_set_d(value_, d, MPFR_RNDN);
    }
    BigFloat(const BigFloat& other) : BigFloat(mpfr_get_prec(other.value_)) {
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& other) noexcept : BigFloat(mpfr_get_prec(other.value_)) {
        mpfr_swap(value_, other.value_);
    }
    BigFloat& operator=(const BigFloat& other) {
        if (this != &other) {
            mpfr_set_prec(value_, mpfr_get_prec(other.value_));
            mpfr_set(value_, other.value_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& other) noexcept {
        mpfr_swap(value_, other.value_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(value_); }

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

    // Rounded to `digits` significant decimal digits in scientific-free form
    // when the magnitude allows it.
    std::string to_decimal(int digits, mpfr_rnd_t rnd = MPFR_RNDN) const;

    static BigFloat from_rational(const BigRational& q, mpfr_rnd_t rnd,
                                  mpfr_prec_t precision = kDefaultPrecision);
    static BigFloat from_string(const std::string& decimal, mpfr_rnd_t rnd,
                                mpfr_prec_t precision = kDefaultPrecision);

    friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.value_, b.value_); }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return compare(a, b) <= 0; }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return compare(a, b) < 0; }

private:
    mpfr_t value_;
};

// Closed enclosure [lo, hi] of a real number.
struct Interval {
    BigFloat lo;
    BigFloat hi;

    bool contains(const BigFloat& v) const { return lo <= v && v <= hi; }
    bool well_formed() const { return lo <= hi; }
};

} // namespace smcensus
