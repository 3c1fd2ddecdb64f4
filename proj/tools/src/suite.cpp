#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>

#include "smcensus/bounds.hpp"
#include "smcensus/cli.hpp"
#include "smcensus/counting_lens.hpp"
#include "smcensus/distributions.hpp"
#include "smcensus/errors.hpp"
#include "smcensus/instances.hpp"
#include "smcensus/matchings.hpp"
#include "smcensus/parallel.hpp"
#include "smcensus/rng.hpp"
#include "smcensus/rotations.hpp"
#include "smcensus/tangled_grid.hpp"

namespace smcensus {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxWitnesses = 5;
constexpr int kInstanceCount = 200;
constexpr int kCriterionMaxN = 7;
constexpr double kBoundSlack = 1e-9;          // example family closed-form comparison
constexpr double kSigmas = 4.0;               // Monte Carlo acceptance band
constexpr std::size_t kPrimeSamples = 1'000'000;
constexpr std::size_t kSamplerSamples = 100'000;
constexpr std::size_t kLensSamples = 2'000;
constexpr int kFiniteNMax = 1'000'000;

struct Witnesses {
    json list = json::array();
    std::size_t failures = 0;
    void add(const std::string& w) {
        ++failures;
        if (list.size() < kMaxWitnesses) list.push_back(w);
    }
    bool empty() const { return failures == 0; }
};

std::uint64_t stream_seed(const RunConfig& config, int criterion, std::uint64_t index) {
    return Rng::derive_seed(config.seed, static_cast<std::uint64_t>(criterion) * 1'000'000 + index);
}

// ---- instances shared by the bijection, structure, grid and sanity checks

struct InstanceData {
    std::string label;
    int n = 0;
    std::optional<PreferenceProfile> profile;
    std::vector<Matching> brute;
    std::vector<Matching> via_rotations;
    RotationPoset poset;
    BigInt poset_downsets;
    std::optional<TangledGrid> grid;
    BigInt grid_downsets;
    std::string error;  // exception text, if any step threw
};

std::vector<std::pair<std::string, PreferenceProfile>> criterion_profiles(const RunConfig& config) {
    std::vector<std::pair<std::string, PreferenceProfile>> out;
    const int top = std::min(config.max_n, kCriterionMaxN);
    out.emplace_back("n1", random_instance(1, config.seed));
    if (top < 2) return out;
    out.emplace_back("I2", instance_I2());
    for (int i = 0; i < kInstanceCount; ++i) {
        const int n = 2 + i % (top - 1);
        const std::uint64_t seed = stream_seed(config, 1, static_cast<std::uint64_t>(i));
        out.emplace_back("random n=" + std::to_string(n) + " seed=" + std::to_string(seed), random_instance(n, seed));
    }
    return out;
}

const std::vector<InstanceData>& instance_data(const RunConfig& config) {
    static std::mutex mutex;
    static std::map<std::pair<std::uint64_t, int>, std::vector<InstanceData>> cache;
    std::lock_guard lock(mutex);
    const auto key = std::make_pair(config.seed, config.max_n);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    auto profiles = criterion_profiles(config);
    std::vector<InstanceData> data(profiles.size());
    parallel_for(profiles.size(), [&](std::size_t i) {
        InstanceData& d = data[i];
        d.label = profiles[i].first;
        d.profile = profiles[i].second;
        d.n = d.profile->n();
        try {
            d.brute = enumerate_stable_bruteforce(*d.profile);
            d.poset = build_rotation_poset(*d.profile);
            d.poset_downsets = count_downsets(d.poset.as_finite_poset(), kMaxDownsetCountSize);
            d.via_rotations = matchings_from_downsets(*d.profile, d.poset);
            d.grid = embed_in_tangled_grid(d.poset, d.n);
            d.grid_downsets = count_downsets(d.grid->poset, kMaxDownsetCountSize);
        } catch (const std::exception& e) {
            d.error = e.what();
        }
    });
    return cache.emplace(key, std::move(data)).first->second;
}

// ---- criteria

CheckRecord bijection(const RunConfig& config) {
    const auto& data = instance_data(config);
    Witnesses w;
    bool injected = false;
    std::size_t total = 0;
    for (const auto& d : data) {
        if (!d.error.empty()) {
            w.add(d.label + ": " + d.error);
            continue;
        }
        auto via = d.via_rotations;
        if (config.inject_fault && !injected && via.size() >= 2) {
            via.pop_back();
            injected = true;
        }
        total += d.brute.size();
        const bool counts = BigInt(static_cast<unsigned long>(d.brute.size())) == d.poset_downsets &&
                            d.poset_downsets == BigInt(static_cast<unsigned long>(via.size()));
        if (!counts || via != d.brute)
            w.add(d.label + ": brute " + std::to_string(d.brute.size()) + ", downsets " + to_string(d.poset_downsets) +
                  ", via rotations " + std::to_string(via.size()));
    }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"instances", data.size()}, {"stable_matchings_total", total}, {"fault_injected", injected},
              {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

CheckRecord structure(const RunConfig& config) {
    const auto& data = instance_data(config);
    Witnesses w;
    std::size_t elements = 0;
    int longest = 0;
    for (const auto& d : data) {
        if (!d.error.empty()) {
            w.add(d.label + ": " + d.error);
            continue;
        }
        elements += static_cast<std::size_t>(d.poset.size());
        for (const auto* chains : {&d.poset.m_chains, &d.poset.w_chains})
            for (const auto& c : *chains) longest = std::max(longest, static_cast<int>(c.size()));
        const auto report = check_structure(d.poset);
        for (const auto& check : report.checks)
            if (!check.pass)
                w.add(d.label + ": " + check.id + (check.witnesses.empty() ? "" : " (" + check.witnesses.front() + ")"));
    }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"instances", data.size()}, {"rotations_total", elements}, {"longest_chain", longest},
              {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

CheckRecord grid_embedding(const RunConfig& config) {
    const auto& data = instance_data(config);
    Witnesses w;
    for (const auto& d : data) {
        if (!d.error.empty()) {
            w.add(d.label + ": " + d.error);
            continue;
        }
        const auto violations = tangled_grid_violations(*d.grid);
        if (!violations.empty()) w.add(d.label + ": " + violations.front());
        if (d.grid->poset.size() != d.n * d.n) w.add(d.label + ": grid has " + std::to_string(d.grid->poset.size()) + " elements");
        if (d.grid_downsets < d.poset_downsets)
            w.add(d.label + ": grid downsets " + to_string(d.grid_downsets) + " < poset downsets " + to_string(d.poset_downsets));
    }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"grids", data.size()}, {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

CheckRecord diamond(const RunConfig&) {
    Witnesses w;
    json counts = json::array();
    for (int n = 1; n <= 8; ++n) {
        const BigInt got = count_downsets(grid_diamond(n).poset, kMaxDownsetCountSize);
        const BigInt want = binomial(static_cast<std::uint64_t>(2 * n), static_cast<std::uint64_t>(n));
        counts.push_back({{"n", n}, {"downsets", to_string(got)}});
        if (got != want) w.add("n=" + std::to_string(n) + ": " + to_string(got) + " != " + to_string(want));
    }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"counts", counts}, {"witnesses", w.list}};
    return r;
}

// Rows of the X_1 table for (i,i,0), (i,0,i), (0,i,i); columns are the reveal
// orders 123, 132, 213, 231, 312, 321. Entry codes: -1 is N+1, -2 is N.
constexpr std::array<std::array<int, 3>, 6> kTableOrders{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
constexpr std::array<std::array<int, 6>, 3> kTableCells{{{-1, -1, 2, 1, -2, 1}, {-1, -1, -2, 1, 2, 1}, {-1, -1, 2, 1, 2, 1}}};

CheckRecord reveal_counts(const RunConfig&) {
    Witnesses w;
    json rows = json::array();
    for (int N : {2, 5, 10}) {
        const TupleFamily family = example1_family(N);
        for (int row = 0; row < 3; ++row)
            for (int i = 1; i <= N; ++i) {
                const std::vector<int> s = row == 0 ? std::vector<int>{i, i, 0} : row == 1 ? std::vector<int>{i, 0, i} : std::vector<int>{0, i, i};
                for (std::size_t col = 0; col < kTableOrders.size(); ++col) {
                    const int code = kTableCells[static_cast<std::size_t>(row)][col];
                    const int want = code == -1 ? N + 1 : code == -2 ? N : code;
                    const int got = x_count(family, s, kTableOrders[col], 0);
                    if (got != want)
                        w.add("N=" + std::to_string(N) + " row " + std::to_string(row) + " i=" + std::to_string(i) +
                              " col " + std::to_string(col) + ": " + std::to_string(got) + " != " + std::to_string(want));
                }
            }

        // log(2^(2/3) (N+1) N^(1/3)) for every fixed order
        const double closed = std::log(N + 1.0) + std::log(static_cast<double>(N)) / 3 + 2 * std::log(2.0) / 3;
        double worst = -1e300;
        for (const auto& order : kTableOrders) {
            const auto res = bound(family, {BoundVariant::fixed_perm_expect_s,
                                            PermutationDistribution::single({order.begin(), order.end()})});
            worst = std::max(worst, res.value);
            if (res.value > closed + kBoundSlack)
                w.add("N=" + std::to_string(N) + ": fixed-order bound " + std::to_string(res.value) + " above closed form");
            if (!res.holds) w.add("N=" + std::to_string(N) + ": fixed-order bound below log|S|");
        }
        const auto cor = bound(family, {BoundVariant::corollary_product, PermutationDistribution::uniform()});
        BigRational want_product(3 * N + 6, 6);
        want_product.canonicalize();
        want_product = want_product * want_product * want_product;
        if (!cor.product || *cor.product != want_product)
            w.add("N=" + std::to_string(N) + ": corollary product " + (cor.product ? to_string(*cor.product) : "missing") +
                  " != " + to_string(want_product));
        if (!cor.holds) w.add("N=" + std::to_string(N) + ": corollary product below |S|");
        rows.push_back({{"N", N}, {"fixed_order_value_max", worst}, {"closed_form", closed},
                        {"corollary_product", cor.product ? to_string(*cor.product) : ""}, {"size", 3 * N}});
    }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"example", rows}, {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

struct NamedFamily {
    std::string name;
    TupleFamily family;
};

std::vector<NamedFamily> lens_families(const RunConfig& config) {
    std::vector<NamedFamily> out;
    for (int N : {2, 5, 10}) out.push_back({"example N=" + std::to_string(N), example1_family(N)});
    const int graph_top = std::max(2, std::min(config.max_n, 6));
    std::uint64_t attempt = 0;
    for (int g = 0; g < 50; ++g) {
        const int n = 2 + g % (graph_top - 1);
        for (;;) {
            const auto seed = stream_seed(config, 6, attempt++);
            const auto graph = random_bipartite(n, 0.6, seed);
            if (count_perfect_matchings(graph) == 0) continue;
            out.push_back({"graph n=" + std::to_string(n) + " seed=" + std::to_string(seed), matchings_family(graph)});
            break;
        }
    }
    const int grid_top = std::min(config.max_n, 4);
    for (int n = 2; n <= grid_top; ++n)
        for (int s = 0; s < 20; ++s) {
            const auto seed = stream_seed(config, 6, 1'000 + static_cast<std::uint64_t>(n * 100 + s));
            out.push_back({"grid n=" + std::to_string(n) + " seed=" + std::to_string(seed),
                           downsets_family(random_tangled_grid(n, seed))});
        }
    return out;
}

CheckRecord counting_inequality(const RunConfig& config) {
    const auto families = lens_families(config);
    const std::size_t mc_samples = config.samples > 0 ? config.samples : kLensSamples;
    std::vector<std::vector<std::string>> problems(families.size());
    parallel_for(families.size(), [&](std::size_t f) {
        const auto& fam = families[f];
        std::vector<int> identity(static_cast<std::size_t>(fam.family.n()));
        for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<int>(i);
        const std::vector<BoundMode> modes{
            {BoundVariant::fixed_perm_expect_s, PermutationDistribution::single(identity)},
            {BoundVariant::expect_both, PermutationDistribution::uniform()},
            {BoundVariant::max_s_expect_pi_log, PermutationDistribution::uniform()},
            {BoundVariant::corollary_product, PermutationDistribution::uniform()},
            {BoundVariant::expect_both, PermutationDistribution::monte_carlo(mc_samples)},
            {BoundVariant::max_s_expect_pi_log, PermutationDistribution::monte_carlo(mc_samples)},
        };
        for (const auto& mode : modes) {
            try {
                const auto res = bound(fam.family, mode, stream_seed(config, 6, 10'000 + f));
                if (!res.holds)
                    problems[f].push_back(fam.name + ": " + to_string(mode.variant) + (res.exact ? " exact " : " mc ") +
                                          std::to_string(res.value) + " < " + std::to_string(res.log_size));
            } catch (const std::exception& e) {
                problems[f].push_back(fam.name + ": " + e.what());
            }
        }
    });
    Witnesses w;
    for (const auto& p : problems)
        for (const auto& s : p) w.add(s);
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"families", families.size()}, {"bounds_per_family", 6}, {"mc_samples", mc_samples},
              {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

CheckRecord bregman(const RunConfig& config) {
    Witnesses w;
    const int top = std::max(1, std::min(config.max_n, 7));
    const std::array<double, 4> densities{0.3, 0.5, 0.7, 0.9};
    for (int g = 0; g < 200; ++g) {
        const int n = 1 + g % top;
        const auto seed = stream_seed(config, 7, static_cast<std::uint64_t>(g));
        const auto check = bregman_check(random_bipartite(n, densities[static_cast<std::size_t>(g) % densities.size()], seed));
        if (!check.pass) w.add("n=" + std::to_string(n) + " seed=" + std::to_string(seed) + ": permanent " + to_string(check.perfect_matchings));
    }
    json tight = json::array();
    for (int n = 1; n <= 4; ++n) {
        const auto check = bregman_check(complete_bipartite(n));
        tight.push_back({{"n", n}, {"permanent", to_string(check.perfect_matchings)}, {"tight", check.tight}});
        if (!check.tight || !check.pass) w.add("K_" + std::to_string(n) + "," + std::to_string(n) + " not tight");
    }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"random_graphs", 200}, {"complete", tight}, {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

// Interval of the cycle 0..n containing t = 0, found by walking from t.
struct GapOracle {
    std::vector<BigInt> count_by_gap;     // index k
    BigInt t_chosen_sum, t_chosen_count, t_free_sum, t_free_count;
};

GapOracle brute_force_gaps(int n, int l) {
    GapOracle o;
    o.count_by_gap.assign(static_cast<std::size_t>(n + 2), BigInt(0));
    const int points = n + 1;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << points); ++mask) {
        if (std::popcount(mask) != l) continue;
        auto chosen = [&](int p) { return ((mask >> (((p % points) + points) % points)) & 1U) != 0; };
        int back = 0;
        while (!chosen(back)) --back;
        int fwd = 1;
        while (!chosen(fwd)) ++fwd;
        const int gap = fwd - back;
        o.count_by_gap[static_cast<std::size_t>(gap)] += 1;
        if (chosen(0)) {
            o.t_chosen_sum += gap;
            o.t_chosen_count += 1;
        } else {
            o.t_free_sum += gap;
            o.t_free_count += 1;
        }
    }
    return o;
}

CheckRecord distribution_exactness(const RunConfig&) {
    Witnesses w;
    std::size_t pairs = 0;
    for (int n = 2; n <= 20; ++n)
        for (int l = 2; l <= n; ++l) {
            ++pairs;
            const std::string at = "n=" + std::to_string(n) + " l=" + std::to_string(l);
            const Pmf pmf = nl_pmf(n, l);
            if (pmf.total() != 1) w.add(at + ": total " + to_string(pmf.total()));
            const auto e = nl_expectation(n, l);
            BigRational free_want(2 * (n + 1), l + 1), chosen_want(n + 1, l);
            free_want.canonicalize();
            chosen_want.canonicalize();
            if (!e.within_bound) w.add(at + ": E[N_l] = " + to_string(e.mean) + " above 2(n+1)/(l+1)");
            if (e.mean_t_unchosen != free_want) w.add(at + ": E[N_l | t free] = " + to_string(e.mean_t_unchosen));
            if (e.mean_t_chosen != chosen_want) w.add(at + ": E[N_l | t chosen] = " + to_string(e.mean_t_chosen));
            if (n > 12) continue;
            const GapOracle o = brute_force_gaps(n, l);
            const BigInt subsets = binomial(static_cast<std::uint64_t>(n + 1), static_cast<std::uint64_t>(l));
            for (int k = 1; k <= n + 1; ++k) {
                BigRational brute(o.count_by_gap[static_cast<std::size_t>(k)], subsets);
                brute.canonicalize();
                if (brute != pmf.at(k)) w.add(at + " k=" + std::to_string(k) + ": pmf " + to_string(pmf.at(k)) + " != " + to_string(brute));
            }
            BigRational bc(o.t_chosen_sum, o.t_chosen_count), bf(o.t_free_sum, o.t_free_count);
            bc.canonicalize();
            bf.canonicalize();
            if (bc != e.mean_t_chosen || bf != e.mean_t_unchosen) w.add(at + ": conditional means disagree with enumeration");
        }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"pairs", pairs}, {"enumerated_up_to_n", 12}, {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

CheckRecord dominance(const RunConfig& config) {
    Witnesses w;
    std::size_t cases = 0;
    std::size_t grids = 0;
    const int top = std::min(config.max_n, 4);
    for (int n = 2; n <= top; ++n)
        for (int s = 0; s < 20; ++s) {
            const auto seed = stream_seed(config, 9, static_cast<std::uint64_t>(n * 100 + s));
            const auto report = dominance_check(random_tangled_grid(n, seed));
            ++grids;
            cases += report.cases;
            for (const auto& wit : report.witnesses) w.add("n=" + std::to_string(n) + " seed=" + std::to_string(seed) + ": " + wit);
            if (!report.pass && report.witnesses.empty()) w.add("n=" + std::to_string(n) + " seed=" + std::to_string(seed));
        }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"grids", grids}, {"cases", cases}, {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

CheckRecord identities(const RunConfig&) {
    Witnesses w;
    std::size_t triples = 0;
    for (int n = 0; n <= 40; ++n)
        for (int m = 0; m <= n; ++m)
            for (int a = 0; m + a <= n; ++a) {
                ++triples;
                const auto res = whitworth(m, a, n);
                if (!res.equal)
                    w.add("whitworth m=" + std::to_string(m) + " a=" + std::to_string(a) + " n=" + std::to_string(n));
            }
    for (int k = 1; k <= 200; ++k) {
        if (!integral_check(k, NxVariant::section3).equal) w.add("integral section3 k=" + std::to_string(k));
        if (k >= 2 && !integral_check(k, NxVariant::section4).equal) w.add("integral section4 k=" + std::to_string(k));
    }
    for (int i = 1; i <= 20; ++i) {
        BigRational x(i, 21);
        x.canonicalize();
        if (!section4_normalization(x).equal) w.add("normalization x=" + to_string(x));
    }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"whitworth_triples", triples}, {"integral_k_max", 200}, {"normalization_points", 20},
              {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

json enclosure_json(const SeriesEnclosure& e) {
    return {{"truncation", e.truncation},
            {"lo", e.interval.lo.to_decimal(20, MPFR_RNDD)},
            {"hi", e.interval.hi.to_decimal(20, MPFR_RNDU)},
            {"tail", e.tail_hi.to_decimal(6, MPFR_RNDU)},
            {"bound", e.bound.to_decimal(6)},
            {"majorant_verified", e.majorant_verified},
            {"holds", e.holds}};
}

CheckRecord constants(const RunConfig& config) {
    Witnesses w;
    const auto scan = finite_n_tg_scan(kFiniteNMax);
    if (!scan.holds) w.add("finite-n term reaches " + scan.max_hi.to_decimal(12) + " at n=" + std::to_string(scan.argmax));
    const auto tg = series_tg_constant(config.truncation);
    if (!tg.holds) w.add("tg series hi " + tg.interval.hi.to_decimal(12, MPFR_RNDU) + " above " + kTgSeriesBound);
    const auto sm = series_sm_constant(config.truncation);
    if (!sm.holds) w.add("sm series hi " + sm.interval.hi.to_decimal(12, MPFR_RNDU) + " above " + kSmSeriesBound);
    const auto rep = bound_report(1);
    if (!rep.tg_base_holds) w.add("exp(2.4076) above 11.11");
    if (!rep.sm_base_alt_holds) w.add("exp(1.2663) above 3.55");
    if (!rep.sm_base_holds) w.add("exp(1.2662) above 3.55");
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"finite_n", {{"n_max", scan.n_max}, {"max_hi", scan.max_hi.to_decimal(12, MPFR_RNDU)},
                            {"argmax", scan.argmax}, {"holds", scan.holds}}},
              {"tg_series", enclosure_json(tg)},
              {"sm_series", enclosure_json(sm)},
              {"exp_2.4076", rep.exp_tg_base},
              {"exp_1.2662", rep.exp_sm_base},
              {"exp_1.2663", rep.exp_sm_base_alt},
              {"failures", w.failures},
              {"witnesses", w.list}};
    return r;
}

CheckRecord dependent_points(const RunConfig& config) {
    Witnesses w;
    const std::array<std::pair<int, int>, 10> as{{{1, 10}, {1, 3}, {1, 2}, {1, 1}, {3, 2}, {2, 1}, {3, 1}, {5, 1}, {10, 1}, {100, 1}}};
    std::size_t jensen_cases = 0;
    double tightest = 1e300;
    for (const auto& [p0, q0] : as)
        for (const auto& [p1, q1] : as)
            for (const auto& [p2, q2] : as)
                for (int xi = 0; xi <= 10; ++xi) {
                    ++jensen_cases;
                    const auto res = jensen_pair_check(BigRational(p0, q0), BigRational(p1, q1), BigRational(p2, q2), BigRational(xi, 10));
                    tightest = std::min(tightest, res.lhs - res.rhs);
                    if (!res.pass) w.add("jensen fails at x=" + std::to_string(xi) + "/10");
                }
    const std::size_t samples = config.samples > 0 ? config.samples : kPrimeSamples;
    const auto patterns = legal_dependency_patterns();
    const std::array<double, 5> xs{0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<NxPrimeCheck> results(patterns.size() * xs.size());
    parallel_for(results.size(), [&](std::size_t c) {
        results[c] = nx_prime_check(xs[c % xs.size()], patterns[c / xs.size()], samples, stream_seed(config, 12, c));
    });
    json rows = json::array();
    for (std::size_t c = 0; c < results.size(); ++c) {
        const auto& res = results[c];
        const auto& pattern = patterns[c / xs.size()];
        rows.push_back({{"pattern", to_string(pattern)}, {"x", xs[c % xs.size()]}, {"e_log_prime", res.e_log_prime},
                        {"e_log", res.e_log}, {"pass", res.pass}});
        if (!res.pass) w.add("pattern " + to_string(pattern) + " x=" + std::to_string(xs[c % xs.size()]));
    }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"jensen_cases", jensen_cases}, {"jensen_min_gap", tightest}, {"samples", samples},
              {"nx_prime", rows}, {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

// Cells k = 1..kmax plus one tail cell, kmax the first k with Pr[> k] < 1e-3.
template <class Pmf>
void compare_cells(const std::vector<int>& values, Pmf pmf, int max_support, const std::string& label, Witnesses& w) {
    const double total = static_cast<double>(values.size());
    std::map<int, std::size_t> counts;
    for (int v : values) ++counts[v];
    double below = 0;
    int kmax = 1;
    for (; kmax <= max_support; ++kmax) {
        below += pmf(kmax);
        if (1 - below < 1e-3) break;
    }
    kmax = std::min(kmax, max_support);
    std::size_t seen = 0;
    double covered = 0;
    auto check = [&](double p, std::size_t count, const std::string& cell) {
        const double sigma = std::sqrt(std::max(p * (1 - p), 0.0) / total);
        const double dev = std::abs(static_cast<double>(count) / total - p);
        if (dev > kSigmas * sigma && !(p == 0 && count == 0))
            w.add(label + " " + cell + ": empirical " + std::to_string(static_cast<double>(count) / total) + " vs " + std::to_string(p));
    };
    for (int k = 1; k <= kmax; ++k) {
        const double p = pmf(k);
        covered += p;
        const std::size_t c = counts.count(k) ? counts[k] : 0;
        seen += c;
        check(p, c, "k=" + std::to_string(k));
    }
    check(std::max(0.0, 1 - covered), values.size() - seen, "tail>" + std::to_string(kmax));
}

CheckRecord samplers(const RunConfig& config) {
    Witnesses w;
    const std::size_t samples = config.samples > 0 ? config.samples : kSamplerSamples;
    std::size_t runs = 0;
    const std::array<std::pair<int, int>, 5> nl_cases{{{6, 2}, {6, 3}, {10, 5}, {12, 12}, {20, 7}}};
    for (std::size_t c = 0; c < nl_cases.size(); ++c) {
        const auto [n, l] = nl_cases[c];
        const auto seed = stream_seed(config, 13, c);
        const auto values = sample_nl(n, l, samples, seed);
        const Pmf pmf = nl_pmf(n, l);
        ++runs;
        compare_cells(values, [&](int k) { return pmf.at(k).get_d(); }, n, "N_l n=" + std::to_string(n) + " l=" + std::to_string(l), w);
        if (sample_nl(n, l, samples, seed) != values) w.add("N_l stream not reproducible");
        if (sample_nl(n, l, samples, seed + 1) == values) w.add("N_l stream ignores the seed");
    }
    const std::array<double, 5> xs{0.1, 0.3, 0.5, 0.7, 0.9};
    for (auto variant : {NxVariant::section3, NxVariant::section4})
        for (std::size_t c = 0; c < xs.size(); ++c) {
            const auto seed = stream_seed(config, 13, 100 + c + (variant == NxVariant::section4 ? 50 : 0));
            const auto s = sample_nx(xs[c], variant, samples, seed);
            ++runs;
            compare_cells(s.values, [&](int k) { return nx_pmf(xs[c], k, variant); }, 2 * s.window + 1,
                          "N_x " + to_string(variant) + " x=" + std::to_string(xs[c]), w);
            if (sample_nx(xs[c], variant, samples, seed).values != s.values) w.add("N_x stream not reproducible");
        }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"runs", runs}, {"samples", samples}, {"sigmas", kSigmas}, {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

CheckRecord global_sanity(const RunConfig& config) {
    Witnesses w;
    const auto& data = instance_data(config);
    std::size_t grids = 0;
    for (const auto& d : data) {
        if (!d.error.empty()) {
            w.add(d.label + ": " + d.error);
            continue;
        }
        if (!within_sm_bound(BigInt(static_cast<unsigned long>(d.brute.size())), d.n))
            w.add(d.label + ": " + std::to_string(d.brute.size()) + " stable matchings above 3.55^n");
        if (d.n <= 6) {
            ++grids;
            if (!within_tg_bound(d.grid_downsets, d.n)) w.add(d.label + ": grid downsets above 11.11^n");
        }
    }
    const int top = std::min(config.max_n, 6);
    for (int n = 1; n <= top; ++n) {
        ++grids;
        if (!within_tg_bound(count_downsets(grid_diamond(n).poset, kMaxDownsetCountSize), n)) w.add("diamond n=" + std::to_string(n));
        for (int s = 0; s < 5; ++s) {
            const auto seed = stream_seed(config, 14, static_cast<std::uint64_t>(n * 10 + s));
            ++grids;
            if (!within_tg_bound(count_downsets(random_tangled_grid(n, seed).poset, kMaxDownsetCountSize), n))
                w.add("random grid n=" + std::to_string(n) + " seed=" + std::to_string(seed));
        }
    }
    CheckRecord r{"", w.empty(), {}};
    r.body = {{"instances", data.size()}, {"grids", grids}, {"failures", w.failures}, {"witnesses", w.list}};
    return r;
}

using Criterion = CheckRecord (*)(const RunConfig&);

const std::array<std::pair<const char*, Criterion>, kCriterionCount> kCriteria{{
    {"c01_bijection", bijection},
    {"c02_structure", structure},
    {"c03_grid_embedding", grid_embedding},
    {"c04_diamond", diamond},
    {"c05_reveal_counts", reveal_counts},
    {"c06_counting_inequality", counting_inequality},
    {"c07_bregman", bregman},
    {"c08_distribution_exactness", distribution_exactness},
    {"c09_stochastic_dominance", dominance},
    {"c10_identities", identities},
    {"c11_constants", constants},
    {"c12_dependent_points", dependent_points},
    {"c13_samplers", samplers},
    {"c14_global_sanity", global_sanity},
}};

std::set<int> selected_criteria(const std::string& suite) {
    std::set<int> out;
    if (suite == "all") {
        for (int i = 1; i <= kCriterionCount; ++i) out.insert(i);
        return out;
    }
    std::stringstream ss(suite);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int v = 0;
        try {
            std::size_t used = 0;
            v = std::stoi(item, &used);
            if (used != item.size()) v = 0;
        } catch (const std::exception&) {
            v = 0;
        }
        if (v < 1 || v > kCriterionCount) throw InvalidArgument("unknown criterion '" + item + "' in --suite");
        out.insert(v);
    }
    return out;
}

} // namespace

const std::vector<std::string>& criterion_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& c : kCriteria) v.emplace_back(c.first);
        return v;
    }();
    return ids;
}

CheckRecord run_criterion(int number, const RunConfig& config) {
    if (number < 1 || number > kCriterionCount) throw InvalidArgument("criterion number out of range");
    const auto& [id, fn] = kCriteria[static_cast<std::size_t>(number - 1)];
    CheckRecord r;
    try {
        r = fn(config);
    } catch (const std::exception& e) {
        r.pass = false;
        r.body = {{"error", e.what()}};
    }
    r.id = id;
    return r;
}

std::vector<CheckRecord> run_verify_suite(const RunConfig& config) {
    std::vector<CheckRecord> out;
    for (int c : selected_criteria(config.suite)) out.push_back(run_criterion(c, config));
    std::sort(out.begin(), out.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
    return out;
}

} // namespace smcensus
