#include "smcensus/bounds.hpp"

#include <cstdint>
#include <functional>
#include <vector>

#include "smcensus/errors.hpp"

namespace smcensus {

WhitworthResult whitworth(int m, int a, int n) {
    if (m < 0 || a < 0 || n < m + a)
        throw InvalidArgument("whitworth needs m >= 0, a >= 0, n >= m + a");
    const auto u = [](int v) { return static_cast<std::uint64_t>(v); };
    WhitworthResult out;
    out.lhs = 0;
    for (int j = 0; j <= m; ++j) {
        BigRational t(binomial(u(m), u(j)), binomial(u(n), u(j + a)));
        t.canonicalize();
        out.lhs += t;
    }
    out.rhs = BigRational(BigInt(n + 1), (a + 1) * binomial(u(n - m + 1), u(a + 1)));
    out.rhs.canonicalize();
    out.equal = out.lhs == out.rhs;
    return out;
}

Interval finite_n_tg_term(int n, mpfr_prec_t precision) {
    if (n < 1) throw InvalidArgument("finite_n_tg_term needs n >= 1");
    Interval sum{BigFloat(precision), BigFloat(precision)};
    BigFloat lg_lo(precision), lg_hi(precision), t(precision);
    for (int k = 2; k <= n; ++k) {
        const auto den = static_cast<unsigned long>(k + 1) * static_cast<unsigned long>(k + 2);
        mpfr_set_ui(lg_lo.get(), static_cast<unsigned long>(k), MPFR_RNDN);
        mpfr_log(lg_lo.get(), lg_lo.get(), MPFR_RNDD);
        mpfr_set_ui(lg_hi.get(), static_cast<unsigned long>(k), MPFR_RNDN);
        mpfr_log(lg_hi.get(), lg_hi.get(), MPFR_RNDU);
        mpfr_div_ui(t.get(), lg_lo.get(), den, MPFR_RNDD);
        mpfr_add(sum.lo.get(), sum.lo.get(), t.get(), MPFR_RNDD);
        mpfr_div_ui(t.get(), lg_hi.get(), den, MPFR_RNDU);
        mpfr_add(sum.hi.get(), sum.hi.get(), t.get(), MPFR_RNDU);
    }
    // 2 (n+2)/(n+1) * sum + 2 log(n+1) / (n+1)
    const auto n1 = static_cast<unsigned long>(n + 1);
    const auto n2 = static_cast<unsigned long>(n + 2);
    Interval out{BigFloat(precision), BigFloat(precision)};
    auto finish = [&](BigFloat& dst, const BigFloat& s, mpfr_rnd_t rnd) {
        mpfr_mul_ui(dst.get(), s.get(), 2 * n2, rnd);
        mpfr_div_ui(dst.get(), dst.get(), n1, rnd);
        mpfr_set_ui(t.get(), n1, MPFR_RNDN);
        mpfr_log(t.get(), t.get(), rnd);
        mpfr_mul_ui(t.get(), t.get(), 2, rnd);
        mpfr_div_ui(t.get(), t.get(), n1, rnd);
        mpfr_add(dst.get(), dst.get(), t.get(), rnd);
    };
    finish(out.lo, sum.lo, MPFR_RNDD);
    finish(out.hi, sum.hi, MPFR_RNDU);
    return out;
}

FiniteNScan finite_n_tg_scan(int n_max) {
    if (n_max < 1) throw InvalidArgument("finite_n_tg_scan needs n_max >= 1");
    constexpr mpfr_prec_t prec = 128;
    const BigFloat bound = BigFloat::from_string(kTgSeriesBound, MPFR_RNDD, prec);
    BigFloat sum(prec), lg(prec), t(prec), value(prec);
    FiniteNScan out;
    out.n_max = n_max;
    out.max_hi = BigFloat(prec);
    mpfr_set_inf(out.max_hi.get(), -1);
    // lg holds log(n+1) rounded up; it becomes the k = n+1 log of the next step
    mpfr_set_ui(lg.get(), 2, MPFR_RNDN);
    mpfr_log(lg.get(), lg.get(), MPFR_RNDU);
    for (int n = 1; n <= n_max; ++n) {
        const auto n1 = static_cast<unsigned long>(n + 1);
        if (n >= 2) {
            // lg currently holds log n
            mpfr_div_ui(t.get(), lg.get(), static_cast<unsigned long>(n + 1) * static_cast<unsigned long>(n + 2), MPFR_RNDU);
            mpfr_add(sum.get(), sum.get(), t.get(), MPFR_RNDU);
            mpfr_set_ui(lg.get(), n1, MPFR_RNDN);
            mpfr_log(lg.get(), lg.get(), MPFR_RNDU);
        }
        mpfr_mul_ui(value.get(), sum.get(), 2 * (n1 + 1), MPFR_RNDU);
        mpfr_div_ui(value.get(), value.get(), n1, MPFR_RNDU);
        mpfr_mul_ui(t.get(), lg.get(), 2, MPFR_RNDU);
        mpfr_div_ui(t.get(), t.get(), n1, MPFR_RNDU);
        mpfr_add(value.get(), value.get(), t.get(), MPFR_RNDU);
        if (mpfr_cmp(value.get(), out.max_hi.get()) > 0) {
            mpfr_set(out.max_hi.get(), value.get(), MPFR_RNDU);
            out.argmax = n;
        }
    }
    out.holds = out.max_hi <= bound;
    return out;
}

namespace {

using Coefficient = std::function<void(std::int64_t k, mpfr_ptr lo, mpfr_ptr hi)>;

// sum_{k=2}^K c_k log k with c_k >= 0, regrouped as sum_p log p * (sum of
// e * c_k over p^e || k) so only one logarithm per prime is needed.
Interval log_weighted_sum(std::int64_t K, const Coefficient& coefficient) {
    const auto size = static_cast<std::size_t>(K + 1);
    constexpr std::uint32_t unmarked = ~std::uint32_t{0};
    std::vector<std::uint32_t> least_rank(size, unmarked);  // rank of the least prime factor
    std::vector<std::uint32_t> primes;
    for (std::size_t i = 2; i < size; ++i) {
        if (least_rank[i] == unmarked) {
            least_rank[i] = static_cast<std::uint32_t>(primes.size());
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        // linear sieve: i * p for every prime p up to the least factor of i
        for (std::uint32_t r = 0; r <= least_rank[i]; ++r) {
            const std::uint64_t j = static_cast<std::uint64_t>(primes[r]) * i;
            if (j >= size) break;
            least_rank[j] = r;
        }
    }

    std::vector<BigFloat> acc_lo(primes.size()), acc_hi(primes.size());
    BigFloat c_lo, c_hi;
    for (std::int64_t k = 2; k <= K; ++k) {
        coefficient(k, c_lo.get(), c_hi.get());
        auto rest = static_cast<std::uint64_t>(k);
        while (rest > 1) {
            const std::uint32_t r = least_rank[rest];
            mpfr_add(acc_lo[r].get(), acc_lo[r].get(), c_lo.get(), MPFR_RNDD);
            mpfr_add(acc_hi[r].get(), acc_hi[r].get(), c_hi.get(), MPFR_RNDU);
            rest /= primes[r];
        }
    }

    Interval out;
    BigFloat lg, t;
    for (std::size_t r = 0; r < primes.size(); ++r) {
        mpfr_set_ui(lg.get(), primes[r], MPFR_RNDN);
        mpfr_log(lg.get(), lg.get(), MPFR_RNDD);
        mpfr_mul(t.get(), lg.get(), acc_lo[r].get(), MPFR_RNDD);
        mpfr_add(out.lo.get(), out.lo.get(), t.get(), MPFR_RNDD);
        mpfr_set_ui(lg.get(), primes[r], MPFR_RNDN);
        mpfr_log(lg.get(), lg.get(), MPFR_RNDU);
        mpfr_mul(t.get(), lg.get(), acc_hi[r].get(), MPFR_RNDU);
        mpfr_add(out.hi.get(), out.hi.get(), t.get(), MPFR_RNDU);
    }
    return out;
}

// factor * (log K + 1) / K, rounded up: the integral of factor * log t / t^2
// over [K, inf). log t / t^2 decreases for t >= 2, so it majorizes the sum of
// factor * log k / k^2 over k > K.
BigFloat integral_tail(std::int64_t K, unsigned long factor) {
    BigFloat t;
    mpfr_set_ui(t.get(), static_cast<unsigned long>(K), MPFR_RNDN);
    mpfr_log(t.get(), t.get(), MPFR_RNDU);
    mpfr_add_ui(t.get(), t.get(), 1, MPFR_RNDU);
    mpfr_mul_ui(t.get(), t.get(), factor, MPFR_RNDU);
    mpfr_div_ui(t.get(), t.get(), static_cast<unsigned long>(K), MPFR_RNDU);
    return t;
}

SeriesEnclosure finish(std::int64_t K, const Interval& partial, BigFloat tail, const char* bound, bool verified) {
    SeriesEnclosure out;
    out.truncation = K;
    out.partial_lo = partial.lo;
    out.partial_hi = partial.hi;
    out.tail_hi = std::move(tail);
    out.interval.lo = partial.lo;
    mpfr_add(out.interval.hi.get(), partial.hi.get(), out.tail_hi.get(), MPFR_RNDU);
    out.bound = BigFloat::from_string(bound, MPFR_RNDD);
    out.majorant_verified = verified;
    out.holds = verified && out.interval.hi <= out.bound;
    return out;
}

void set_ratio(mpfr_ptr dst, unsigned long num, std::initializer_list<unsigned long> den, mpfr_rnd_t rnd) {
    mpfr_set_ui(dst, num, rnd);
    for (unsigned long d : den) mpfr_div_ui(dst, dst, d, rnd);
}

} // namespace

SeriesEnclosure series_tg_constant(std::int64_t K) {
    if (K < 10) throw InvalidArgument("series_tg_constant needs K >= 10");
    bool verified = true;
    for (std::int64_t k = 2; k <= K; ++k) {
        // 2/((k+1)(k+2)) <= 2/k^2
        const auto w = static_cast<unsigned __int128>(k);
        if ((w + 1) * (w + 2) < w * w) verified = false;
    }
    const Interval partial = log_weighted_sum(K, [](std::int64_t k, mpfr_ptr lo, mpfr_ptr hi) {
        const auto u = static_cast<unsigned long>(k);
        set_ratio(lo, 2, {u + 1, u + 2}, MPFR_RNDD);
        set_ratio(hi, 2, {u + 1, u + 2}, MPFR_RNDU);
    });
    return finish(K, partial, integral_tail(K, 2), kTgSeriesBound, verified);
}

SeriesEnclosure series_sm_constant(std::int64_t K) {
    if (K < 8) throw InvalidArgument("series_sm_constant needs K >= 8");
    // (2k(k+7)+72)/((k+3)(k+5)(k+6)(k+7)) <= 4/k^2 for k >= 4: cross-multiplied,
    // 4(k+3)(k+5)(k+6)(k+7) - k^2 (2k(k+7)+72) = 2k^4 + 70k^3 + 572k^2 + 2124k + 2520,
    // positive for every k >= 0. Checked term by term as well.
    bool verified = true;
    for (std::int64_t k = 4; k <= K; ++k) {
        const auto w = static_cast<unsigned __int128>(k);
        if (4 * (w + 3) * (w + 5) * (w + 6) * (w + 7) < w * w * (2 * w * (w + 7) + 72)) verified = false;
    }
    // k = 2, 3 coefficients 1/12 and 23/630 are within 4/k^2 as well
    const Interval partial = log_weighted_sum(K, [](std::int64_t k, mpfr_ptr lo, mpfr_ptr hi) {
        const auto u = static_cast<unsigned long>(k);
        if (k == 2) {
            set_ratio(lo, 1, {12}, MPFR_RNDD);
            set_ratio(hi, 1, {12}, MPFR_RNDU);
        } else if (k == 3) {
            set_ratio(lo, 23, {630}, MPFR_RNDD);
            set_ratio(hi, 23, {630}, MPFR_RNDU);
        } else {
            const unsigned long num = 2 * u * (u + 7) + 72;
            set_ratio(lo, num, {u + 3, u + 5, u + 6, u + 7}, MPFR_RNDD);
            set_ratio(hi, num, {u + 3, u + 5, u + 6, u + 7}, MPFR_RNDU);
        }
    });
    return finish(K, partial, integral_tail(K, 4), kSmSeriesBound, verified);
}

BigRational series_coefficient(int k, NxVariant variant) {
    if (variant == NxVariant::section3) {
        if (k < 1) throw InvalidArgument("section3 coefficient needs k >= 1");
        BigRational c(2, (k + 1) * (k + 2));
        c.canonicalize();
        return c;
    }
    if (k < 2) throw InvalidArgument("section4 coefficient needs k >= 2");
    if (k == 2) return BigRational(1, 12);
    if (k == 3) return BigRational(23, 630);
    const BigInt kk(k);
    BigRational c(2 * kk * (kk + 7) + 72, (kk + 3) * (kk + 5) * (kk + 6) * (kk + 7));
    c.canonicalize();
    return c;
}

namespace {

// Dense polynomial in x with rational coefficients, lowest degree first.
struct Poly {
    std::vector<BigRational> c;

    static Poly constant(const BigRational& v) { return Poly{{v}}; }
    static Poly x() { return Poly{{BigRational(0), BigRational(1)}}; }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r{std::vector<BigRational>(std::max(a.c.size(), b.c.size()), BigRational(0))};
        for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + b * Poly::constant(-1); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r{std::vector<BigRational>(a.c.size() + b.c.size() - 1, BigRational(0))};
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
    friend Poly operator*(int s, const Poly& a) { return Poly::constant(s) * a; }

    Poly pow(int e) const {
        Poly r = Poly::constant(1);
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    BigRational integral01() const {
        BigRational s(0);
        for (std::size_t i = 0; i < c.size(); ++i) s += c[i] / BigRational(static_cast<long>(i + 1));
        return s;
    }
};

Poly pmf_polynomial(int k, NxVariant variant) {
    const Poly x = Poly::x();
    const Poly q = Poly::constant(1) - x;
    if (variant == NxVariant::section3) return k * (x * x * q.pow(k - 1));
    const Poly pair = Poly::constant(1) - q * q;
    if (k == 2) return 2 * (q.pow(3) * pair * pair);
    if (k == 3) return q.pow(5) * pair * pair + 2 * (q.pow(5) * pair * x);
    return 2 * (q.pow(k + 2) * pair * x) + 2 * (q.pow(k + 3) * pair * x) + (k - 4) * (q.pow(k + 4) * x * x);
}

} // namespace

IntegralCheck integral_check(int k, NxVariant variant) {
    if (k < (variant == NxVariant::section3 ? 1 : 2)) throw InvalidArgument("integral_check: k out of range");
    IntegralCheck out;
    out.integral = pmf_polynomial(k, variant).integral01();
    out.closed_form = series_coefficient(k, variant);
    out.equal = out.integral == out.closed_form;
    return out;
}

NormalizationCheck section4_normalization(const BigRational& x_in) {
    BigRational x = x_in;
    x.canonicalize();
    constexpr int K = 4;
    BigRational rest = nx_tail(x, K, NxVariant::section4);
    for (int k = 2; k <= K; ++k) rest += nx_pmf(x, k, NxVariant::section4);
    NormalizationCheck out;
    out.complement = 1 - rest;
    const BigRational q = 1 - x;
    const BigRational pair = 1 - q * q;
    out.pr_one = x + q * pair * pair;
    out.equal = out.complement == out.pr_one;
    return out;
}

namespace {

// e^(c n) with c taken from its decimal rounded in direction rnd.
BigFloat exp_scaled(const char* c, int n, mpfr_rnd_t rnd) {
    BigFloat v = BigFloat::from_string(c, rnd);
    mpfr_mul_ui(v.get(), v.get(), static_cast<unsigned long>(n), rnd);
    mpfr_exp(v.get(), v.get(), rnd);
    return v;
}

BigFloat power_of(const char* base, int n, mpfr_rnd_t rnd) {
    BigFloat v = BigFloat::from_string(base, rnd);
    mpfr_pow_ui(v.get(), v.get(), static_cast<unsigned long>(n), rnd);
    return v;
}

} // namespace

BoundReport bound_report(int n) {
    if (n < 1) throw InvalidArgument("bound_report needs n >= 1");
    constexpr int digits = 12;
    BoundReport r;
    r.n = n;
    r.tg_exponential = exp_scaled("2.4076", n, MPFR_RNDN).to_decimal(digits);
    r.tg_power = power_of("11.11", n, MPFR_RNDN).to_decimal(digits);
    r.sm_exponential = exp_scaled("1.2662", n, MPFR_RNDN).to_decimal(digits);
    r.sm_exponential_alt = exp_scaled("1.2663", n, MPFR_RNDN).to_decimal(digits);
    r.sm_power = power_of("3.55", n, MPFR_RNDN).to_decimal(digits);
    r.exp_tg_base = exp_scaled("2.4076", 1, MPFR_RNDN).to_decimal(digits);
    r.exp_sm_base = exp_scaled("1.2662", 1, MPFR_RNDN).to_decimal(digits);
    r.exp_sm_base_alt = exp_scaled("1.2663", 1, MPFR_RNDN).to_decimal(digits);
    r.tg_base_holds = exp_scaled("2.4076", 1, MPFR_RNDU) <= BigFloat::from_string("11.11", MPFR_RNDD);
    r.sm_base_holds = exp_scaled("1.2662", 1, MPFR_RNDU) <= BigFloat::from_string("3.55", MPFR_RNDD);
    r.sm_base_alt_holds = exp_scaled("1.2663", 1, MPFR_RNDU) <= BigFloat::from_string("3.55", MPFR_RNDD);
    return r;
}

namespace {

bool within_power(const BigInt& count, int n, unsigned long numerator, unsigned long denominator) {
    if (n < 0) throw InvalidArgument("n must be non-negative");
    BigInt lhs, rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), denominator, static_cast<unsigned long>(n));
    mpz_ui_pow_ui(rhs.get_mpz_t(), numerator, static_cast<unsigned long>(n));
    return count * lhs <= rhs;
}

} // namespace

bool within_sm_bound(const BigInt& count, int n) { return within_power(count, n, 355, 100); }
bool within_tg_bound(const BigInt& count, int n) { return within_power(count, n, 1111, 100); }

} // namespace smcensus
