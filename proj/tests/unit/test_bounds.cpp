#include <gtest/gtest.h>

#include <cmath>

#include "smcensus/bounds.hpp"
#include "smcensus/errors.hpp"

using namespace smcensus;

namespace {

double simpson(double (*f)(double, int), int k, int intervals = 4000) {
    const double h = 1.0 / intervals;
    double s = f(0, k) + f(1, k);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4 : 2) * f(i * h, k);
    return s * h / 3;
}

double section4_pmf(double x, int k) {
    if (x <= 0 || x >= 1) {
        // endpoints: every section4 term for k >= 2 vanishes at x = 0 and x = 1
        return 0;
    }
    return nx_pmf(x, k, NxVariant::section4);
}

double tg_term(int n) {
    double s = 0;
    for (int k = 2; k <= n; ++k) s += std::log(k) / ((k + 1.0) * (k + 2.0));
    return 2.0 / (n + 1) * std::log(n + 1.0) + 2.0 * (n + 2.0) / (n + 1.0) * s;
}

} // namespace

TEST(Bounds, WhitworthIdentity) {
    for (int n = 0; n <= 14; ++n)
        for (int m = 0; m <= n; ++m)
            for (int a = 0; m + a <= n; ++a) {
                BigRational lhs = 0;
                for (int j = 0; j <= m; ++j) {
                    BigRational term(binomial(m, j), binomial(n, j + a));
                    term.canonicalize();
                    lhs += term;
                }
                BigRational rhs(BigInt(n + 1), (a + 1) * binomial(n - m + 1, a + 1));
                rhs.canonicalize();
                const auto w = whitworth(m, a, n);
                EXPECT_EQ(w.lhs, lhs);
                EXPECT_EQ(w.rhs, rhs);
                EXPECT_TRUE(w.equal) << m << ' ' << a << ' ' << n;
            }
    EXPECT_THROW(whitworth(3, 2, 4), InvalidArgument);
    EXPECT_THROW(whitworth(-1, 0, 4), InvalidArgument);
}

TEST(Bounds, FiniteTermEnclosesDoubleSum) {
    for (int n = 1; n <= 60; ++n) {
        const auto iv = finite_n_tg_term(n);
        EXPECT_LE(iv.lo.to_double(), tg_term(n) + 1e-12) << n;
        EXPECT_GE(iv.hi.to_double(), tg_term(n) - 1e-12) << n;
    }
    EXPECT_NEAR(finite_n_tg_term(1).lo.to_double(), std::log(2.0), 1e-15);
    EXPECT_THROW(finite_n_tg_term(0), InvalidArgument);
}

TEST(Bounds, FiniteScanIsMonotone) {
    const auto scan = finite_n_tg_scan(2000);
    EXPECT_EQ(scan.argmax, 2000);
    EXPECT_TRUE(scan.holds);
    EXPECT_NEAR(scan.max_hi.to_double(), tg_term(2000), 1e-10);
}

TEST(Bounds, TgSeriesEnclosures) {
    const auto small = series_tg_constant(10'000);
    const auto large = series_tg_constant(200'000);
    EXPECT_TRUE(small.majorant_verified);
    EXPECT_TRUE(large.majorant_verified);
    EXPECT_LE(small.partial_lo, large.partial_lo);
    EXPECT_LE(large.interval.lo, small.interval.hi);
    EXPECT_LE(large.interval.hi, small.interval.hi);

    double direct = 0;
    for (int k = 2; k <= 200'000; ++k) direct += 2 * std::log(k) / ((k + 1.0) * (k + 2.0));
    EXPECT_NEAR(large.partial_lo.to_double(), direct, 1e-10);
    // limit sits near 1.20356
    EXPECT_GT(large.interval.lo.to_double(), 1.2034);
    EXPECT_LT(large.interval.hi.to_double(), 1.2038 + 1e-4);
    EXPECT_THROW(series_tg_constant(9), InvalidArgument);
}

// The certified value of this series is about 0.69398 regardless of K, so it
// never drops below the 0.6331 it is compared with.
TEST(Bounds, SmSeriesEnclosure) {
    const auto e = series_sm_constant(100'000);
    EXPECT_TRUE(e.majorant_verified);
    double direct = std::log(2.0) / 12 + std::log(3.0) * 23 / 630;
    for (int k = 4; k <= 100'000; ++k) {
        const double kk = k;
        direct += std::log(kk) * (2 * kk * (kk + 7) + 72) / ((kk + 3) * (kk + 5) * (kk + 6) * (kk + 7));
    }
    EXPECT_NEAR(e.partial_lo.to_double(), direct, 1e-10);
    EXPECT_GT(e.interval.lo.to_double(), 0.6937);
    EXPECT_FALSE(e.holds);
    EXPECT_THROW(series_sm_constant(7), InvalidArgument);
}

TEST(Bounds, SeriesCoefficients) {
    for (int k = 1; k <= 30; ++k) {
        EXPECT_EQ(series_coefficient(k, NxVariant::section3), make_rational(2, (k + 1) * (k + 2)));
        EXPECT_TRUE(integral_check(k, NxVariant::section3).equal);
    }
    EXPECT_EQ(series_coefficient(2, NxVariant::section4), BigRational(1, 12));
    EXPECT_EQ(series_coefficient(3, NxVariant::section4), BigRational(23, 630));
    for (int k = 2; k <= 20; ++k) {
        EXPECT_TRUE(integral_check(k, NxVariant::section4).equal) << k;
        EXPECT_NEAR(series_coefficient(k, NxVariant::section4).get_d(), simpson(section4_pmf, k), 1e-10) << k;
    }
    for (int k = 4; k <= 20; ++k) {
        const auto closed = make_rational(2 * k * (k + 7) + 72, (k + 3) * (k + 5) * (k + 6) * (k + 7));
        EXPECT_EQ(series_coefficient(k, NxVariant::section4), closed) << k;
    }
    EXPECT_THROW(integral_check(1, NxVariant::section4), InvalidArgument);
}

TEST(Bounds, FourPointNormalization) {
    for (int num = 1; num < 12; ++num) {
        BigRational x(num, 12);
        x.canonicalize();
        const auto check = section4_normalization(x);
        EXPECT_TRUE(check.equal) << x.get_str();
        EXPECT_EQ(check.pr_one, nx_pmf(x, 1, NxVariant::section4));
    }
    EXPECT_TRUE(section4_normalization(BigRational(7, 21)).equal);
}

TEST(Bounds, ExponentialConstants) {
    const auto r = bound_report(3);
    EXPECT_TRUE(r.tg_base_holds);
    EXPECT_TRUE(r.sm_base_holds);
    EXPECT_TRUE(r.sm_base_alt_holds);
    EXPECT_NEAR(std::stod(r.exp_tg_base), std::exp(2.4076), 1e-9);
    EXPECT_NEAR(std::stod(r.exp_sm_base), std::exp(1.2662), 1e-9);
    EXPECT_NEAR(std::stod(r.exp_sm_base_alt), std::exp(1.2663), 1e-9);
    EXPECT_NEAR(std::stod(r.sm_power), std::pow(3.55, 3), 1e-9);
    EXPECT_THROW(bound_report(0), InvalidArgument);
}

TEST(Bounds, IntegerPowerComparisons) {
    EXPECT_TRUE(within_sm_bound(3, 1));
    EXPECT_FALSE(within_sm_bound(4, 1));
    EXPECT_TRUE(within_sm_bound(12, 2));
    EXPECT_FALSE(within_sm_bound(13, 2));
    EXPECT_TRUE(within_tg_bound(11, 1));
    EXPECT_FALSE(within_tg_bound(12, 1));
    EXPECT_TRUE(within_tg_bound(123, 2));
    EXPECT_FALSE(within_tg_bound(124, 2));
}
