#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "smcensus/bounds.hpp"
#include "smcensus/cli.hpp"
#include "smcensus/distributions.hpp"
#include "smcensus/errors.hpp"
#include "smcensus/export.hpp"
#include "smcensus/instances.hpp"
#include "smcensus/matchings.hpp"
#include "smcensus/poset.hpp"
#include "smcensus/rng.hpp"
#include "smcensus/rotations.hpp"
#include "smcensus/tangled_grid.hpp"

namespace smcensus {

using nlohmann::json;

std::string CheckRecord::to_line() const {
    json doc = json::object();
    doc["check"] = id;
    doc["pass"] = pass;
    for (const auto& [key, value] : body.items()) doc[key] = value;
    return doc.dump();
}

namespace {

PreferenceProfile load_profile(const RunConfig& config) {
    if (!config.input_path) return random_instance(config.max_n, config.seed);
    std::ifstream in(*config.input_path);
    if (!in) throw InvalidArgument("cannot open " + *config.input_path);
    return parse_instance(in);
}

json matchings_json(const std::vector<Matching>& ms) {
    json out = json::array();
    for (const auto& m : ms) out.push_back(m.assignment());
    return out;
}

} // namespace

std::vector<CheckRecord> run_enumerate(const RunConfig& config) {
    const auto profile = load_profile(config);
    const std::string& method = config.method;
    if (method != "brute" && method != "rotations" && method != "both")
        throw InvalidArgument("--method must be brute, rotations or both");
    CheckRecord r{"enumerate", true, {{"n", profile.n()}, {"method", method}}};
    std::optional<std::vector<Matching>> brute, via;
    if (method != "rotations") {
        brute = enumerate_stable_bruteforce(profile);
        r.body["brute"] = brute->size();
        r.body["matchings"] = matchings_json(*brute);
    }
    if (method != "brute") {
        const auto poset = build_rotation_poset(profile);
        via = matchings_from_downsets(profile, poset);
        r.body["rotations"] = via->size();
        r.body["downsets"] = to_string(count_downsets(poset.as_finite_poset(), kMaxDownsetCountSize));
        r.body["matchings"] = matchings_json(*via);
    }
    if (brute && via) r.pass = *brute == *via;
    return {r};
}

std::vector<CheckRecord> run_rotations(const RunConfig& config) {
    const auto profile = load_profile(config);
    const auto poset = build_rotation_poset(profile);
    std::vector<CheckRecord> out;
    out.push_back({"rotations.poset", true, {{"poset", json::parse(to_json(poset))}}});
    for (const auto& check : check_structure(poset).checks)
        out.push_back({"rotations." + check.id, check.pass, {{"description", check.description}, {"witnesses", check.witnesses}}});
    return out;
}

std::vector<CheckRecord> run_grids(const RunConfig& config) {
    const auto profile = load_profile(config);
    const auto poset = build_rotation_poset(profile);
    const auto grid = embed_in_tangled_grid(poset, profile.n());
    const auto violations = tangled_grid_violations(grid);
    const BigInt poset_count = count_downsets(poset.as_finite_poset(), kMaxDownsetCountSize);
    const BigInt grid_count = count_downsets(grid.poset, kMaxDownsetCountSize);
    std::vector<CheckRecord> out;
    out.push_back({"grids.embedding", violations.empty(), {{"grid", json::parse(to_json(grid))}, {"violations", violations}}});
    out.push_back({"grids.downsets", grid_count >= poset_count,
                   {{"poset_downsets", to_string(poset_count)}, {"grid_downsets", to_string(grid_count)},
                    {"within_11.11^n", within_tg_bound(grid_count, profile.n())}}});
    return out;
}

namespace {

json enclosure(const SeriesEnclosure& e) {
    return {{"truncation", e.truncation},
            {"lo", e.interval.lo.to_decimal(20, MPFR_RNDD)},
            {"hi", e.interval.hi.to_decimal(20, MPFR_RNDU)},
            {"partial_hi", e.partial_hi.to_decimal(20, MPFR_RNDU)},
            {"tail", e.tail_hi.to_decimal(12, MPFR_RNDU)},
            {"bound", e.bound.to_decimal(6)},
            {"majorant_verified", e.majorant_verified}};
}

} // namespace

std::vector<CheckRecord> run_bounds(const RunConfig& config) {
    if (config.series == "tg" || config.series == "sm") {
        const auto e = config.series == "tg" ? series_tg_constant(config.truncation) : series_sm_constant(config.truncation);
        return {{"bounds.series_" + config.series, e.holds, enclosure(e)}};
    }
    if (!config.series.empty()) throw InvalidArgument("bounds --series must be tg or sm");
    const auto r = bound_report(std::max(1, config.max_n));
    json body = {{"n", r.n},
                 {"e^(2.4076n)", r.tg_exponential},
                 {"11.11^n", r.tg_power},
                 {"e^(1.2662n)", r.sm_exponential},
                 {"e^(1.2663n)", r.sm_exponential_alt},
                 {"3.55^n", r.sm_power},
                 {"e^2.4076", r.exp_tg_base},
                 {"e^1.2662", r.exp_sm_base},
                 {"e^1.2663", r.exp_sm_base_alt}};
    return {{"bounds.report", r.tg_base_holds && r.sm_base_holds && r.sm_base_alt_holds, body}};
}

std::vector<CheckRecord> run_series(const RunConfig& config) {
    const std::string& which = config.series.empty() ? std::string("tg") : config.series;
    if (which == "tg") {
        const int n_max = static_cast<int>(std::min<std::int64_t>(config.truncation, 1'000'000));
        const auto scan = finite_n_tg_scan(n_max);
        return {{"series.finite_n_tg", scan.holds,
                 {{"n_max", scan.n_max}, {"max_hi", scan.max_hi.to_decimal(15, MPFR_RNDU)}, {"argmax", scan.argmax}}}};
    }
    if (which == "whitworth") {
        bool all = true;
        std::size_t count = 0;
        for (int n = 0; n <= std::max(0, config.max_n); ++n)
            for (int m = 0; m <= n; ++m)
                for (int a = 0; m + a <= n; ++a) {
                    ++count;
                    all = all && whitworth(m, a, n).equal;
                }
        return {{"series.whitworth", all, {{"n_max", config.max_n}, {"triples", count}}}};
    }
    if (which == "section3" || which == "section4") {
        const auto variant = parse_nx_variant(which);
        const int k_max = static_cast<int>(std::min<std::int64_t>(config.truncation, 200));
        json rows = json::array();
        bool all = true;
        for (int k = variant == NxVariant::section3 ? 1 : 2; k <= k_max; ++k) {
            const auto c = integral_check(k, variant);
            all = all && c.equal;
            rows.push_back({{"k", k}, {"integral", to_string(c.integral)}, {"closed_form", to_string(c.closed_form)}});
        }
        return {{"series.integral_" + which, all, {{"coefficients", rows}}}};
    }
    if (which == "nl") {
        std::vector<CheckRecord> out;
        const int n = std::max(2, config.max_n);
        for (int l = 2; l <= n; ++l) {
            const auto pmf = nl_pmf(n, l);
            const auto e = nl_expectation(n, l);
            json p = json::array();
            for (const auto& [k, v] : pmf.support) p.push_back(to_string(v));
            char id[32];
            std::snprintf(id, sizeof id, "series.nl.l%03d", l);
            out.push_back({id, pmf.total() == 1 && e.within_bound,
                           {{"n", n}, {"l", l}, {"pmf", p}, {"mean", to_string(e.mean)},
                            {"mean_t_free", to_string(e.mean_t_unchosen)}, {"mean_t_chosen", to_string(e.mean_t_chosen)}}});
        }
        return out;
    }
    throw InvalidArgument("series --series must be tg, whitworth, section3, section4 or nl");
}

std::vector<CheckRecord> run_simulate(const RunConfig& config) {
    const std::string& which = config.series.empty() ? std::string("chain") : config.series;
    if (which == "chain") {
        const std::size_t samples = config.samples > 0 ? config.samples : 100'000;
        std::vector<CheckRecord> out;
        const int n = std::max(6, config.max_n);
        for (int step = 1; step <= 9; step += 2) {
            const int l = n * step / 10;
            const auto sim = simulate_chain_domination(n, l, samples, Rng::derive_seed(config.seed, static_cast<std::uint64_t>(l)));
            char id[48];
            std::snprintf(id, sizeof id, "simulate.chain.l%04d", l);
            out.push_back({id, sim.pass, {{"n", n}, {"l", l}, {"x", sim.x}, {"samples", samples},
                                          {"worst_gap", sim.worst_gap}, {"slack", kChainSimulationSlack}}});
        }
        return out;
    }
    if (which == "nxprime") {
        const std::size_t samples = config.samples > 0 ? config.samples : 100'000;
        std::vector<CheckRecord> out;
        const auto patterns = legal_dependency_patterns();
        for (std::size_t p = 0; p < patterns.size(); ++p)
            for (int step = 1; step <= 9; step += 2) {
                const double x = step / 10.0;
                const auto r = nx_prime_check(x, patterns[p], samples, Rng::derive_seed(config.seed, p * 10 + static_cast<std::size_t>(step)));
                char id[48];
                std::snprintf(id, sizeof id, "simulate.nxprime.p%zu.x%d", p, step);
                out.push_back({id, r.pass, {{"pattern", to_string(patterns[p])}, {"x", x}, {"e_log_prime", r.e_log_prime},
                                            {"se_prime", r.se_prime}, {"e_log", r.e_log}, {"se", r.se}, {"samples", samples}}});
            }
        return out;
    }
    throw InvalidArgument("simulate --series must be chain or nxprime");
}

int execute(const RunConfig& config, std::ostream& out) {
    std::vector<CheckRecord> records;
    const std::string& c = config.command;
    if (c == "enumerate") records = run_enumerate(config);
    else if (c == "rotations") records = run_rotations(config);
    else if (c == "grids") records = run_grids(config);
    else if (c == "bounds") records = run_bounds(config);
    else if (c == "series") records = run_series(config);
    else if (c == "simulate") records = run_simulate(config);
    else if (c == "verify") records = run_verify_suite(config);
    else throw InvalidArgument("unknown command '" + c + "'");
    std::stable_sort(records.begin(), records.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
    bool all = true;
    for (const auto& r : records) {
        out << r.to_line() << '\n';
        all = all && r.pass;
    }
    out.flush();
    return all ? 0 : 1;
}

int run(int argc, char** argv) {
    CLI::App app{"smcensus: stable matching counting toolkit"};
    app.require_subcommand(1, 1);
    RunConfig config;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", config.seed, "random seed")->capture_default_str();
        sub->add_option("--max-n", config.max_n, "largest side size")->check(CLI::Range(1, 1000))->capture_default_str();
        sub->add_option("--out", config.output_path, "write the report here instead of stdout");
    };
    auto* enumerate = app.add_subcommand("enumerate", "stable matchings by brute force and via rotations");
    enumerate->add_option("--in", config.input_path, "instance JSON file");
    enumerate->add_option("--method", config.method, "brute | rotations | both")
        ->check(CLI::IsMember({"brute", "rotations", "both"}))->capture_default_str();
    auto* rotations = app.add_subcommand("rotations", "rotation poset and its structural checks");
    rotations->add_option("--in", config.input_path, "instance JSON file");
    auto* grids = app.add_subcommand("grids", "tangled grid embedding of the rotation poset");
    grids->add_option("--in", config.input_path, "instance JSON file");
    auto* bounds = app.add_subcommand("bounds", "series enclosures or the final bound report");
    bounds->add_option("--series", config.series, "tg | sm")->check(CLI::IsMember({"tg", "sm"}));
    bounds->add_option("--truncate", config.truncation, "truncation K")->check(CLI::Range(std::int64_t{10}, std::int64_t{100'000'000}))->capture_default_str();
    auto* series = app.add_subcommand("series", "finite-n scan, Whitworth sweep, pmf integrals, N_l tables");
    series->add_option("--series", config.series, "tg | whitworth | section3 | section4 | nl")
        ->check(CLI::IsMember({"tg", "whitworth", "section3", "section4", "nl"}));
    series->add_option("--truncate", config.truncation, "upper index")->check(CLI::Range(std::int64_t{1}, std::int64_t{100'000'000}));
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo checks of the N_x models");
    simulate->add_option("--series", config.series, "chain | nxprime")->check(CLI::IsMember({"chain", "nxprime"}));
    simulate->add_option("--samples", config.samples, "samples per run");
    auto* verify = app.add_subcommand("verify", "acceptance suite");
    verify->add_option("--suite", config.suite, "all, or a comma list of criterion numbers")->capture_default_str();
    verify->add_option("--samples", config.samples, "override Monte Carlo sample counts");
    verify->add_option("--truncate", config.truncation, "series truncation K")->check(CLI::Range(std::int64_t{10}, std::int64_t{100'000'000}));
    verify->add_flag("--inject-fault", config.inject_fault, "negative control: corrupt the bijection check");
    for (auto* sub : {enumerate, rotations, grids, bounds, series, simulate, verify}) common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    config.command = app.get_subcommands().front()->get_name();

    try {
        if (config.output_path) {
            std::ofstream file(*config.output_path);
            if (!file) {
                std::cerr << "cannot write " << *config.output_path << '\n';
                return 2;
            }
            return execute(config, file);
        }
        return execute(config, std::cout);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace smcensus
