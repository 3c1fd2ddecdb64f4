#include "smcensus/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smcensus/counting_lens.hpp"
#include "smcensus/errors.hpp"
#include "smcensus/rng.hpp"

namespace smcensus {

BigRational Pmf::total() const {
    BigRational t(0);
    for (const auto& [k, p] : support) t += p;
    return t;
}

BigRational Pmf::at(int k) const {
    for (const auto& [v, p] : support)
        if (v == k) return p;
    return BigRational(0);
}

BigRational Pmf::cdf(int k) const {
    BigRational t(0);
    for (const auto& [v, p] : support)
        if (v <= k) t += p;
    return t;
}

BigRational Pmf::mean() const {
    BigRational t(0);
    for (const auto& [v, p] : support) t += p * v;
    return t;
}

namespace {

void check_nl_range(int n, int l) {
    if (n < 2 || l < 2 || l > n)
        throw InvalidArgument("N_l needs 2 <= l <= n, got n = " + std::to_string(n) + ", l = " + std::to_string(l));
}

BigRational ratio(const BigInt& a, const BigInt& b) {
    BigRational q(a, b);
    q.canonicalize();
    return q;
}

BigRational power(const BigRational& base, int e) {
    BigRational r(1);
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
    r.canonicalize();
    return r;
}

void check_x(const BigRational& x) {
    if (x <= 0 || x >= 1) throw InvalidArgument("x must lie in (0, 1), got " + to_string(x));
}

} // namespace

Pmf nl_pmf(int n, int l) {
    check_nl_range(n, l);
    Pmf pmf;
    const BigInt denom = binomial(static_cast<std::uint64_t>(n + 1), static_cast<std::uint64_t>(l));
    for (int k = 1; k <= n; ++k)
        pmf.support.emplace_back(k, ratio(k * binomial(static_cast<std::uint64_t>(n - k), static_cast<std::uint64_t>(l - 2)), denom));
    return pmf;
}

NlExpectations nl_expectation(int n, int l) {
    check_nl_range(n, l);
    BigInt chosen_weight, chosen_sum, unchosen_weight, unchosen_sum;
    for (int k = 1; k <= n; ++k) {
        const BigInt c = binomial(static_cast<std::uint64_t>(n - k), static_cast<std::uint64_t>(l - 2));
        chosen_weight += c;
        chosen_sum += c * k;
        unchosen_weight += c * (k - 1);
        unchosen_sum += c * (k - 1) * k;
    }
    NlExpectations out;
    out.mean = nl_pmf(n, l).mean();
    out.mean_t_chosen = ratio(chosen_sum, chosen_weight);
    out.mean_t_unchosen = ratio(unchosen_sum, unchosen_weight);
    out.claimed_bound = ratio(BigInt(2 * (n + 1)), BigInt(l + 1));
    out.within_bound = out.mean <= out.claimed_bound;
    return out;
}

std::string to_string(NxVariant variant) { return variant == NxVariant::section3 ? "section3" : "section4"; }

NxVariant parse_nx_variant(const std::string& name) {
    if (name == "section3") return NxVariant::section3;
    if (name == "section4") return NxVariant::section4;
    throw InvalidArgument("unknown N_x variant '" + name + "'");
}

BigRational nx_pmf(const BigRational& x_in, int k, NxVariant variant) {
    BigRational x = x_in;
    x.canonicalize();
    check_x(x);
    if (k < 1) throw InvalidArgument("N_x takes values k >= 1");
    const BigRational q = 1 - x;
    if (variant == NxVariant::section3) return k * x * x * power(q, k - 1);
    const BigRational pair = 1 - q * q;  // Pr[a point is in A or B]
    switch (k) {
        case 1: return x + q * pair * pair;
        case 2: return 2 * power(q, 3) * pair * pair;
        case 3: return power(q, 5) * pair * pair + 2 * power(q, 5) * pair * x;
        default:
            return 2 * power(q, k + 2) * pair * x + 2 * power(q, k + 3) * pair * x + (k - 4) * power(q, k + 4) * x * x;
    }
}

double nx_pmf(double x, int k, NxVariant variant) {
    if (!(x > 0 && x < 1)) throw InvalidArgument("x must lie in (0, 1)");
    if (k < 1) throw InvalidArgument("N_x takes values k >= 1");
    const double q = 1 - x;
    if (variant == NxVariant::section3) return k * x * x * std::pow(q, k - 1);
    const double pair = 1 - q * q;
    switch (k) {
        case 1: return x + q * pair * pair;
        case 2: return 2 * std::pow(q, 3) * pair * pair;
        case 3: return std::pow(q, 5) * pair * pair + 2 * std::pow(q, 5) * pair * x;
        default:
            return 2 * std::pow(q, k + 2) * pair * x + 2 * std::pow(q, k + 3) * pair * x +
                   (k - 4) * std::pow(q, k + 4) * x * x;
    }
}

BigRational nx_tail(const BigRational& x_in, int K, NxVariant variant) {
    BigRational x = x_in;
    x.canonicalize();
    check_x(x);
    const BigRational q = 1 - x;
    if (variant == NxVariant::section3) {
        if (K < 0) throw InvalidArgument("tail start must be non-negative");
        // x^2 sum_{k>K} k q^(k-1) = x K q^K + q^K
        return x * K * power(q, K) + power(q, K);
    }
    if (K < 4) throw InvalidArgument("section4 tail needs K >= 4");
    const BigRational pair = 1 - q * q;
    // sum_{k>K} q^(k+2) = q^(K+3)/x,  sum_{k>K} q^(k+3) = q^(K+4)/x,
    // sum_{k>K} (k-4) q^(k+4) = q^(K+5) ((K-4)/x + 1/x^2)
    return 2 * pair * x * (power(q, K + 3) / x) + 2 * pair * x * (power(q, K + 4) / x) +
           x * x * power(q, K + 5) * (BigRational(K - 4) / x + 1 / (x * x));
}

BigRational nx_total(const BigRational& x, int K, NxVariant variant) {
    BigRational t = nx_tail(x, K, variant);
    for (int k = 1; k <= K; ++k) t += nx_pmf(x, k, variant);
    return t;
}

double nx_cdf(double x, int k, NxVariant variant) {
    double t = 0;
    for (int v = 1; v <= k; ++v) t += nx_pmf(x, v, variant);
    return std::min(t, 1.0);
}

std::vector<int> sample_nl(int n, int l, std::size_t count, std::uint64_t seed) {
    check_nl_range(n, l);
    Rng rng(seed);
    std::vector<int> points(static_cast<std::size_t>(n + 1));
    std::vector<int> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        std::iota(points.begin(), points.end(), 0);
        // partial Fisher-Yates: the first l entries are the chosen points
        for (int j = 0; j < l; ++j) {
            const auto pick = static_cast<std::size_t>(j) + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n + 1 - j)));
            std::swap(points[static_cast<std::size_t>(j)], points[pick]);
        }
        bool has_t = false;
        int lo = n + 1;  // smallest chosen point > 0
        int hi = 0;      // largest chosen point > 0
        for (int j = 0; j < l; ++j) {
            const int p = points[static_cast<std::size_t>(j)];
            if (p == 0) {
                has_t = true;
                continue;
            }
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        out.push_back(has_t ? lo : lo - hi + n + 1);
    }
    return out;
}

namespace {

int window_for(double x) { return static_cast<int>(std::ceil(40.0 / x)); }

// Length of the interval of A u B containing 0. `in_b` flags offsets -1..2;
// A membership is drawn lazily, right side first, then the left side.
int gap_length(Rng& rng, std::uint64_t threshold, int window, const bool* in_b) {
    auto in_b_at = [&](int j) { return in_b != nullptr && j >= -1 && j <= 2 && in_b[j + 1]; };
    int right = window + 1;
    for (int j = 1; j <= window; ++j) {
        const bool a = rng.hit(threshold);
        if (a || in_b_at(j)) {
            right = j;
            break;
        }
    }
    int left = -window - 1;
    for (int j = 0; j >= -window; --j) {
        const bool a = rng.hit(threshold);
        if (a || in_b_at(j)) {
            left = j;
            break;
        }
    }
    return right - left;
}

} // namespace

NxSamples sample_nx(double x, NxVariant variant, std::size_t count, std::uint64_t seed) {
    if (!(x > 0 && x < 1)) throw InvalidArgument("x must lie in (0, 1)");
    Rng rng(seed);
    const auto threshold = probability_threshold(x);
    NxSamples out;
    out.window = window_for(x);
    out.values.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        if (variant == NxVariant::section3) {
            out.values.push_back(gap_length(rng, threshold, out.window, nullptr));
            continue;
        }
        if (rng.hit(threshold)) {
            out.values.push_back(1);
            continue;
        }
        bool in_b[4];
        for (bool& b : in_b) b = rng.hit(threshold);
        out.values.push_back(gap_length(rng, threshold, out.window, in_b));
    }
    return out;
}

DominanceReport dominance_check(const TangledGrid& grid, int chain, int l) {
    const int n = grid.n();
    if (n > 5) throw CapExceeded("dominance check enumerates prefix sets exhaustively; n <= 5");
    if (chain < 0 || chain >= 2 * n) throw InvalidArgument("chain index out of range");
    DominanceReport report;
    if (l < 2 || l > n) return report;

    const TupleFamily family = downsets_family(grid);
    const int total = 2 * n;
    std::uint32_t opposite = 0;
    std::uint32_t same = 0;
    for (int c = 0; c < total; ++c) {
        if (c == chain) continue;
        if ((c < n) == (chain < n))
            same |= std::uint32_t{1} << c;
        else
            opposite |= std::uint32_t{1} << c;
    }

    // Under a uniform order the prefix set R of `chain` has weight
    // |R|! (2n-1-|R|)!; keep the R with exactly l opposite chains.
    std::vector<std::vector<BigInt>> mass(family.size());  // [member][x] unnormalised
    BigInt total_weight = 0;
    auto visit = [&](std::uint32_t revealed) {
        const int r = std::popcount(revealed);
        const BigInt w = factorial(static_cast<std::uint64_t>(r)) * factorial(static_cast<std::uint64_t>(total - 1 - r));
        total_weight += w;
        const auto xs = x_counts_for_prefix(family, revealed, chain);
        for (std::size_t s = 0; s < family.size(); ++s) {
            auto& row = mass[s];
            const auto x = static_cast<std::size_t>(xs[s]);
            if (row.size() <= x) row.resize(x + 1);
            row[x] += w;
        }
    };
    for (std::uint32_t opp = opposite;; opp = (opp - 1) & opposite) {
        if (std::popcount(opp) == l)
            for (std::uint32_t sm = same;; sm = (sm - 1) & same) {
                visit(opp | sm);
                if (sm == 0) break;
            }
        if (opp == 0) break;
    }

    const Pmf reference = nl_pmf(n, l);
    for (std::size_t s = 0; s < family.size(); ++s) {
        ++report.cases;
        BigInt cumulative = 0;
        for (int k = 1; k <= n + 1; ++k) {
            if (static_cast<std::size_t>(k) < mass[s].size()) cumulative += mass[s][static_cast<std::size_t>(k)];
            const BigRational lhs = ratio(cumulative, total_weight);
            const BigRational rhs = reference.cdf(k);
            if (lhs < rhs) {
                report.pass = false;
                if (report.witnesses.size() < 5)
                    report.witnesses.push_back("chain " + std::to_string(chain) + ", member " + std::to_string(s) +
                                               ", l = " + std::to_string(l) + ", k = " + std::to_string(k) +
                                               ": Pr[X<=k] = " + to_string(lhs) + " < Pr[N_l<=k] = " + to_string(rhs));
                break;
            }
        }
    }
    return report;
}

DominanceReport dominance_check(const TangledGrid& grid) {
    DominanceReport all;
    for (int chain = 0; chain < 2 * grid.n(); ++chain)
        for (int l = 2; l <= grid.n(); ++l) {
            auto r = dominance_check(grid, chain, l);
            all.cases += r.cases;
            if (!r.pass) all.pass = false;
            for (auto& w : r.witnesses)
                if (all.witnesses.size() < 5) all.witnesses.push_back(std::move(w));
        }
    return all;
}

JensenCheck jensen_pair_check(const BigRational& a0_in, const BigRational& a1_in, const BigRational& a2_in,
                              const BigRational& x_in) {
    BigRational a0 = a0_in, a1 = a1_in, a2 = a2_in, x = x_in;
    for (BigRational* v : {&a0, &a1, &a2, &x}) v->canonicalize();
    if (a0 <= 0 || a1 <= 0 || a2 <= 0) throw InvalidArgument("a0, a1, a2 must be positive");
    if (x < 0 || x > 1) throw InvalidArgument("x must lie in [0, 1]");
    const double xd = x.get_d();
    const double l0 = std::log(a0.get_d());
    const double l01 = std::log(BigRational(a0 + a1).get_d());
    const double l02 = std::log(BigRational(a0 + a2).get_d());
    const double l012 = std::log(BigRational(a0 + a1 + a2).get_d());
    JensenCheck out;
    out.lhs = xd * xd * l0 + xd * (1 - xd) * (l01 + l02) + (1 - xd) * (1 - xd) * l012;
    out.rhs = xd * l0 + (1 - xd) * l012;
    out.pass = out.lhs >= out.rhs - 1e-12;
    return out;
}

std::vector<DependencyPattern> legal_dependency_patterns() {
    return {{}, {{-1, 1}}, {{0, 2}}, {{-1, 2}}, {{-1, 1}, {0, 2}}};
}

std::string to_string(const DependencyPattern& pattern) {
    if (pattern.empty()) return "none";
    std::string out;
    for (const auto& [a, b] : pattern) {
        if (!out.empty()) out += ",";
        out += std::to_string(a) + "~" + std::to_string(b);
    }
    return out;
}

namespace {

// Class id per offset -1..2 after merging identified offsets.
std::array<int, 4> dependency_classes(const DependencyPattern& pattern) {
    std::array<int, 4> cls{0, 1, 2, 3};
    auto root = [&](int v) {
        while (cls[static_cast<std::size_t>(v)] != v) v = cls[static_cast<std::size_t>(v)];
        return v;
    };
    for (const auto& [a, b] : pattern) {
        if (a < -1 || a > 2 || b < -1 || b > 2 || a == b)
            throw InvalidArgument("dependency pattern offsets must be distinct members of {-1, 0, 1, 2}");
        cls[static_cast<std::size_t>(root(a + 1))] = root(b + 1);
    }
    for (int v = 0; v < 4; ++v) cls[static_cast<std::size_t>(v)] = root(v);
    for (int v = 0; v < 3; ++v)
        if (cls[static_cast<std::size_t>(v)] == cls[static_cast<std::size_t>(v + 1)])
            throw InvalidArgument("dependency pattern ties adjacent offsets " + std::to_string(v - 1) + " and " +
                                  std::to_string(v));
    return cls;
}

struct MeanAndError {
    double mean;
    double se;
};

MeanAndError mean_log_nx(double x, const std::array<int, 4>& cls, std::size_t samples, Rng rng) {
    const auto threshold = probability_threshold(x);
    const int window = window_for(x);
    double sum = 0;
    double sum_sq = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        double v = 0;
        if (!rng.hit(threshold)) {
            bool class_in[4];
            for (bool& b : class_in) b = rng.hit(threshold);
            bool in_b[4];
            for (int j = 0; j < 4; ++j) in_b[j] = class_in[cls[static_cast<std::size_t>(j)]];
            v = std::log(static_cast<double>(gap_length(rng, threshold, window, in_b)));
        }
        sum += v;
        sum_sq += v * v;
    }
    const double m = static_cast<double>(samples);
    const double mean = sum / m;
    const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1));
    return {mean, std::sqrt(var / m)};
}

} // namespace

NxPrimeCheck nx_prime_check(double x, const DependencyPattern& pattern, std::size_t samples, std::uint64_t seed) {
    if (!(x > 0 && x < 1)) throw InvalidArgument("x must lie in (0, 1)");
    if (samples < 2) throw InvalidArgument("need at least 2 samples");
    const auto cls = dependency_classes(pattern);
    const Rng base(seed);
    const auto plain = mean_log_nx(x, {0, 1, 2, 3}, samples, base.split(0));
    const auto tied = mean_log_nx(x, cls, samples, base.split(1));
    NxPrimeCheck out;
    out.e_log = plain.mean;
    out.se = plain.se;
    out.e_log_prime = tied.mean;
    out.se_prime = tied.se;
    out.samples = samples;
    out.pass = tied.mean <= plain.mean + 4.0 * std::sqrt(plain.se * plain.se + tied.se * tied.se);
    return out;
}

ChainSimulation simulate_chain_domination(int n, int l, std::size_t samples, std::uint64_t seed, double slack) {
    if (n < 6) throw InvalidArgument("chain simulation needs n >= 6");
    if (l < 0 || l > n - 1) throw InvalidArgument("l must lie in [0, n - 1]");
    if (samples < 1) throw InvalidArgument("need at least one sample");
    const int j = n / 2;           // top_D(M) = rho_j; offsets are relative to j
    const int lowest = -j;         // sentinel below rho_1
    const int highest = n - j;     // one past rho_{n-1}
    constexpr int kMaxK = 40;

    Rng rng(seed);
    // the n - 1 w-chains other than the one paired at (rho_j, rho_{j+1}):
    // paired ones at offsets h != 0 (rho_{j+h}, rho_{j+h+1}), then two unpaired
    std::vector<int> others;
    for (int h = 1 - j; h <= n - 2 - j; ++h)
        if (h != 0) others.push_back(h);
    others.push_back(lowest - 100);
    others.push_back(lowest - 100);
    std::vector<std::uint64_t> counts(kMaxK + 1, 0);
    std::vector<int> pool(others.size());

    for (std::size_t s = 0; s < samples; ++s) {
        int x_value = 1;
        // M sits after exactly l of the others; then the special w-chain and
        // the n - 1 other m-chains are inserted at uniform positions.
        int before = l;
        int size = n;  // M plus the n - 1 other w-chains
        auto insert = [&] {
            const auto slot = static_cast<int>(rng.below(static_cast<std::uint64_t>(size + 1)));
            ++size;
            if (slot <= before) {
                ++before;
                return true;
            }
            return false;
        };
        std::iota(pool.begin(), pool.end(), 0);
        for (int t = 0; t < l; ++t) {
            const auto pick = static_cast<std::size_t>(t) + static_cast<std::size_t>(rng.below(pool.size() - static_cast<std::size_t>(t)));
            std::swap(pool[static_cast<std::size_t>(t)], pool[pick]);
        }
        const bool special_first = insert();
        for (int m = 0; m < n - 5; ++m) insert();
        bool in_b[4];
        for (bool& b : in_b) b = insert();
        if (!special_first) {
            int right = highest;
            int left = lowest;
            auto add = [&](int p) {
                if (p > 0)
                    right = std::min(right, p);
                else
                    left = std::max(left, p);
            };
            for (int t = 0; t < l; ++t) {
                const int h = others[static_cast<std::size_t>(pool[static_cast<std::size_t>(t)])];
                if (h < lowest) continue;  // unpaired chain
                add(h >= 1 ? h : h + 1);
            }
            for (int b = 0; b < 4; ++b)
                if (in_b[b]) add(b - 1);
            x_value = right - left;
        }
        ++counts[static_cast<std::size_t>(std::min(x_value, kMaxK))];
    }

    ChainSimulation out;
    out.n = n;
    out.l = l;
    out.x = static_cast<double>(l) / n;
    out.samples = samples;
    std::uint64_t cumulative = 0;
    for (int k = 1; k < kMaxK; ++k) {
        cumulative += counts[static_cast<std::size_t>(k)];
        const double emp = static_cast<double>(cumulative) / static_cast<double>(samples);
        const double ref = out.x > 0 && out.x < 1 ? nx_cdf(out.x, k, NxVariant::section4) : 1.0;
        out.empirical_cdf.push_back(emp);
        out.nx_cdf.push_back(ref);
        out.worst_gap = std::max(out.worst_gap, ref - emp);
    }
    out.pass = out.worst_gap <= slack;
    return out;
}

} // namespace smcensus
