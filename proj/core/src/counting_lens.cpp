#include "smcensus/counting_lens.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "smcensus/errors.hpp"
#include "smcensus/rng.hpp"

namespace smcensus {

TupleFamily::TupleFamily(std::vector<std::vector<std::string>> components, std::vector<std::vector<int>> members)
    : components_(std::move(components)), members_(std::move(members)) {
    const auto n = components_.size();
    for (std::size_t k = 0; k < members_.size(); ++k) {
        const auto& m = members_[k];
        if (m.size() != n)
            throw InvalidArgument("member " + std::to_string(k) + " has " + std::to_string(m.size()) +
                                  " entries, expected " + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i)
            if (m[i] < 0 || static_cast<std::size_t>(m[i]) >= components_[i].size())
                throw InvalidArgument("member " + std::to_string(k) + " entry " + std::to_string(i) +
                                      " is not in its component");
    }
    auto sorted = members_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidArgument("family lists a member twice");
}

std::optional<std::size_t> TupleFamily::find(const std::vector<int>& tuple) const {
    const auto it = std::find(members_.begin(), members_.end(), tuple);
    if (it == members_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - members_.begin());
}

void validate_graph(const BipartiteGraph& graph) {
    if (graph.left_size <= 0 || graph.right_size <= 0) throw InvalidArgument("graph sides must be positive");
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : graph.edges) {
        if (u < 0 || u >= graph.left_size || v < 0 || v >= graph.right_size)
            throw InvalidArgument("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
        if (!seen.insert({u, v}).second)
            throw InvalidArgument("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
}

namespace {

void check_order(std::span<const int> order, int n) {
    if (static_cast<int>(order.size()) != n) throw InvalidArgument("reveal order has the wrong length");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int c : order) {
        if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)])
            throw InvalidArgument("reveal order is not a permutation");
        seen[static_cast<std::size_t>(c)] = 1;
    }
}

// Members grouped by their entries on the components in `mask`.
std::vector<int> group_ids(const TupleFamily& family, std::uint32_t mask) {
    const auto size = family.size();
    std::vector<int> ids(size, 0);
    if (mask == 0) return ids;
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), 0);
    auto project_less = [&](std::size_t a, std::size_t b) {
        for (std::uint32_t m = mask; m; m &= m - 1) {
            const auto c = static_cast<std::size_t>(std::countr_zero(m));
            const int x = family.member(a)[c];
            const int y = family.member(b)[c];
            if (x != y) return x < y;
        }
        return false;
    };
    std::sort(order.begin(), order.end(), project_less);
    int id = 0;
    for (std::size_t k = 0; k < size; ++k) {
        if (k > 0 && project_less(order[k - 1], order[k])) ++id;
        ids[order[k]] = id;
    }
    return ids;
}

// X_i for every member, given the group ids of the revealed prefix.
std::vector<int> x_values(const TupleFamily& family, const std::vector<int>& ids, int i) {
    const auto size = family.size();
    std::vector<std::pair<int, int>> pairs(size);
    for (std::size_t k = 0; k < size; ++k) pairs[k] = {ids[k], family.member(k)[static_cast<std::size_t>(i)]};
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    const int groups = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
    std::vector<int> distinct(static_cast<std::size_t>(groups), 0);
    for (const auto& p : pairs) ++distinct[static_cast<std::size_t>(p.first)];
    std::vector<int> out(size);
    for (std::size_t k = 0; k < size; ++k) out[k] = distinct[static_cast<std::size_t>(ids[k])];
    return out;
}

std::uint32_t prefix_mask(std::span<const int> order, int i) {
    std::uint32_t mask = 0;
    for (int c : order) {
        if (c == i) break;
        mask |= std::uint32_t{1} << c;
    }
    return mask;
}

struct RevealEvent {
    int component;
    std::uint32_t mask;
    int weight_class;
};

// Per (component, member): how often each (X value, weight class) occurs.
using Tally = std::map<std::pair<int, int>, std::int64_t>;

struct ExactTallies {
    std::vector<BigRational> class_weight;
    std::vector<std::vector<Tally>> tally;  // [component][member]
};

ExactTallies tally_exact(const TupleFamily& family, const PermutationDistribution& dist) {
    const int n = family.n();
    ExactTallies out;
    std::vector<RevealEvent> events;
    if (dist.kind == PermutationDistribution::Kind::uniform) {
        if (n > kMaxExactUniformComponents)
            throw InvalidArgument("exact uniform averaging is limited to " +
                                  std::to_string(kMaxExactUniformComponents) + " components; use monte_carlo");
        const BigInt nf = factorial(static_cast<std::uint64_t>(n));
        for (int r = 0; r < n; ++r) {
            BigRational w(factorial(static_cast<std::uint64_t>(r)) * factorial(static_cast<std::uint64_t>(n - 1 - r)), nf);
            w.canonicalize();
            out.class_weight.push_back(w);
        }
        for (int i = 0; i < n; ++i) {
            const std::uint32_t others = ((std::uint32_t{1} << n) - 1) & ~(std::uint32_t{1} << i);
            // all subsets of `others`, including the empty one
            for (std::uint32_t sub = others;; sub = (sub - 1) & others) {
                events.push_back({i, sub, std::popcount(sub)});
                if (sub == 0) break;
            }
        }
    } else {
        for (std::size_t k = 0; k < dist.orders.size(); ++k) {
            check_order(dist.orders[k], n);
            out.class_weight.push_back(dist.kind == PermutationDistribution::Kind::single ? BigRational(1) : dist.weights[k]);
            for (int i = 0; i < n; ++i) events.push_back({i, prefix_mask(dist.orders[k], i), static_cast<int>(k)});
        }
    }
    std::sort(events.begin(), events.end(), [](const RevealEvent& a, const RevealEvent& b) {
        return std::tie(a.mask, a.component, a.weight_class) < std::tie(b.mask, b.component, b.weight_class);
    });

    out.tally.assign(static_cast<std::size_t>(n), std::vector<Tally>(family.size()));
    std::size_t e = 0;
    while (e < events.size()) {
        const std::uint32_t mask = events[e].mask;
        const auto ids = group_ids(family, mask);
        int last_component = -1;
        std::vector<int> xs;
        for (; e < events.size() && events[e].mask == mask; ++e) {
            const int i = events[e].component;
            if (i != last_component) {
                xs = x_values(family, ids, i);
                last_component = i;
            }
            auto& per_member = out.tally[static_cast<std::size_t>(i)];
            for (std::size_t s = 0; s < family.size(); ++s) ++per_member[s][{xs[s], events[e].weight_class}];
        }
    }
    return out;
}

LogSum expected_log(const Tally& tally, const std::vector<BigRational>& weight) {
    LogSum out;
    for (const auto& [key, count] : tally)
        out.add(weight[static_cast<std::size_t>(key.second)] * BigRational(static_cast<long>(count)),
                static_cast<std::uint64_t>(key.first));
    return out;
}

BigRational expected_value(const Tally& tally, const std::vector<BigRational>& weight) {
    BigRational out(0);
    for (const auto& [key, count] : tally)
        out += weight[static_cast<std::size_t>(key.second)] * BigRational(static_cast<long>(count) * key.first);
    return out;
}

// -1 / 0 / 1; doubles decide unless the values are too close to call.
int compare_logs(const LogSum& a, double a_d, const LogSum& b, double b_d) {
    const double gap = a_d - b_d;
    if (std::abs(gap) > 1e-9 * std::max(1.0, std::abs(a_d))) return gap < 0 ? -1 : 1;
    return certified_compare(a, b);
}

LogSum log_of(std::size_t size) {
    LogSum out;
    out.add(BigRational(1), size);
    return out;
}

void validate_mode(const TupleFamily& family, const BoundMode& mode) {
    using Kind = PermutationDistribution::Kind;
    const auto& dist = mode.permutations;
    if (family.size() == 0) throw InvalidArgument("bound of an empty family");
    if (mode.variant == BoundVariant::fixed_perm_expect_s && dist.kind != Kind::single)
        throw InvalidArgument("fixed_perm_expect_s needs a single reveal order");
    if (dist.kind == Kind::single && dist.orders.size() != 1) throw InvalidArgument("single distribution needs one order");
    if (dist.kind == Kind::explicit_list) {
        if (dist.orders.empty() || dist.orders.size() != dist.weights.size())
            throw InvalidArgument("explicit distribution needs one weight per order");
        BigRational total(0);
        for (const auto& w : dist.weights) {
            if (w < 0) throw InvalidArgument("negative permutation weight");
            total += w;
        }
        if (total != 1) throw InvalidArgument("permutation weights sum to " + to_string(total) + ", not 1");
    }
    if (dist.kind == Kind::monte_carlo && dist.samples < 2) throw InvalidArgument("monte_carlo needs at least 2 samples");
    if (family.n() > 31) throw InvalidArgument("at most 31 components are supported");
}

BoundResult bound_exact(const TupleFamily& family, const BoundMode& mode) {
    const int n = family.n();
    const auto tallies = tally_exact(family, mode.permutations);
    BoundResult out;
    out.variant = mode.variant;
    out.exact = true;
    const LogSum log_size = log_of(family.size());
    out.log_size = log_size.to_double();

    if (mode.variant == BoundVariant::corollary_product) {
        BigRational product(1);
        for (int i = 0; i < n; ++i) {
            BigRational best(0);
            for (const auto& t : tallies.tally[static_cast<std::size_t>(i)])
                best = std::max(best, expected_value(t, tallies.class_weight));
            out.per_component_rational.push_back(best);
            out.per_component.push_back(std::log(best.get_d()));
            product *= best;
        }
        out.value = std::accumulate(out.per_component.begin(), out.per_component.end(), 0.0);
        out.holds = product >= BigRational(static_cast<unsigned long>(family.size()));
        out.product = product;
        return out;
    }

    LogSum total;
    for (int i = 0; i < n; ++i) {
        const auto& per_member = tallies.tally[static_cast<std::size_t>(i)];
        LogSum component;
        if (mode.variant == BoundVariant::max_s_expect_pi_log) {
            double best_d = 0;
            for (std::size_t s = 0; s < per_member.size(); ++s) {
                LogSum e = expected_log(per_member[s], tallies.class_weight);
                const double d = e.to_double();
                if (s == 0 || compare_logs(e, d, component, best_d) > 0) {
                    component = std::move(e);
                    best_d = d;
                }
            }
        } else {
            const BigRational inv_size(BigInt(1), BigInt(static_cast<unsigned long>(family.size())));
            for (const auto& t : per_member) {
                LogSum e = expected_log(t, tallies.class_weight);
                e *= inv_size;
                component += e;
            }
        }
        out.per_component.push_back(component.to_double());
        total += component;
    }
    out.value = total.to_double();
    out.holds = certified_compare(total, log_size) >= 0;
    out.exact_value = std::move(total);
    return out;
}

struct RunningMean {
    double sum = 0;
    double sum_sq = 0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
    }
    double mean(std::size_t m) const { return sum / static_cast<double>(m); }
    double std_error(std::size_t m) const {
        const double mu = mean(m);
        const double var = std::max(0.0, (sum_sq - static_cast<double>(m) * mu * mu) / static_cast<double>(m - 1));
        return std::sqrt(var / static_cast<double>(m));
    }
};

BoundResult bound_monte_carlo(const TupleFamily& family, const BoundMode& mode, std::uint64_t seed) {
    const int n = family.n();
    const std::size_t m = mode.permutations.samples;
    Rng rng(seed);
    BoundResult out;
    out.variant = mode.variant;
    out.exact = false;
    out.samples = m;
    out.seed = seed;
    out.log_size = std::log(static_cast<double>(family.size()));
    std::vector<int> order(static_cast<std::size_t>(n));

    if (mode.variant == BoundVariant::expect_both) {
        RunningMean total;
        std::vector<RunningMean> per(static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < m; ++k) {
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(std::span<int>(order));
            const auto& s = family.member(static_cast<std::size_t>(rng.below(family.size())));
            double sum = 0;
            for (int i = 0; i < n; ++i) {
                const double v = std::log(static_cast<double>(x_count(family, s, order, i)));
                per[static_cast<std::size_t>(i)].add(v);
                sum += v;
            }
            total.add(sum);
        }
        for (const auto& p : per) out.per_component.push_back(p.mean(m));
        out.value = total.mean(m);
        out.std_error = total.std_error(m);
    } else {
        const bool use_log = mode.variant == BoundVariant::max_s_expect_pi_log;
        std::vector<std::vector<RunningMean>> acc(static_cast<std::size_t>(n), std::vector<RunningMean>(family.size()));
        for (std::size_t k = 0; k < m; ++k) {
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(std::span<int>(order));
            std::uint32_t mask = 0;
            for (int i : order) {
                const auto xs = x_values(family, group_ids(family, mask), i);
                for (std::size_t s = 0; s < family.size(); ++s) {
                    const double x = static_cast<double>(xs[s]);
                    acc[static_cast<std::size_t>(i)][s].add(use_log ? std::log(x) : x);
                }
                mask |= std::uint32_t{1} << i;
            }
        }
        double var = 0;
        for (int i = 0; i < n; ++i) {
            const auto& row = acc[static_cast<std::size_t>(i)];
            std::size_t best = 0;
            for (std::size_t s = 1; s < row.size(); ++s)
                if (row[s].mean(m) > row[best].mean(m)) best = s;
            const double mu = row[best].mean(m);
            const double se = row[best].std_error(m);
            out.per_component.push_back(use_log ? mu : std::log(mu));
            // delta method for log of a mean
            const double se_log = use_log ? se : se / mu;
            var += se_log * se_log;
        }
        out.value = std::accumulate(out.per_component.begin(), out.per_component.end(), 0.0);
        out.std_error = std::sqrt(var);
    }
    out.holds = out.value + 4.0 * *out.std_error >= out.log_size;
    return out;
}

} // namespace

int x_count(const TupleFamily& family, const std::vector<int>& s, std::span<const int> order, int i) {
    const int n = family.n();
    check_order(order, n);
    if (i < 0 || i >= n) throw InvalidArgument("component index out of range");
    if (!family.find(s)) throw InvalidArgument("tuple is not a member of the family");
    std::vector<int> revealed;
    for (int c : order) {
        if (c == i) break;
        revealed.push_back(c);
    }
    std::set<int> values;
    for (const auto& x : family.members()) {
        bool agrees = true;
        for (int c : revealed)
            if (x[static_cast<std::size_t>(c)] != s[static_cast<std::size_t>(c)]) {
                agrees = false;
                break;
            }
        if (agrees) values.insert(x[static_cast<std::size_t>(i)]);
    }
    return static_cast<int>(values.size());
}

std::vector<int> x_counts_for_prefix(const TupleFamily& family, std::uint32_t revealed, int i) {
    if (i < 0 || i >= family.n() || family.n() > 31) throw InvalidArgument("component index out of range");
    if (revealed >> family.n() || (revealed >> i) & 1U) throw InvalidArgument("revealed set must exclude i and fit the family");
    return x_values(family, group_ids(family, revealed), i);
}

PermutationDistribution PermutationDistribution::single(std::vector<int> order) {
    PermutationDistribution d;
    d.kind = Kind::single;
    d.orders.push_back(std::move(order));
    return d;
}

PermutationDistribution PermutationDistribution::explicit_list(std::vector<std::vector<int>> orders,
                                                               std::vector<BigRational> weights) {
    PermutationDistribution d;
    d.kind = Kind::explicit_list;
    d.orders = std::move(orders);
    d.weights = std::move(weights);
    return d;
}

PermutationDistribution PermutationDistribution::monte_carlo(std::size_t samples) {
    PermutationDistribution d;
    d.kind = Kind::monte_carlo;
    d.samples = samples;
    return d;
}

std::string to_string(BoundVariant variant) {
    switch (variant) {
        case BoundVariant::fixed_perm_expect_s: return "fixed_perm_expect_s";
        case BoundVariant::expect_both: return "expect_both";
        case BoundVariant::max_s_expect_pi_log: return "max_s_expect_pi_log";
        case BoundVariant::corollary_product: return "corollary_product";
    }
    return "unknown";
}

BoundVariant parse_bound_variant(const std::string& name) {
    for (auto v : {BoundVariant::fixed_perm_expect_s, BoundVariant::expect_both, BoundVariant::max_s_expect_pi_log,
                   BoundVariant::corollary_product})
        if (to_string(v) == name) return v;
    throw InvalidArgument("unknown bound variant '" + name + "'");
}

BoundResult bound(const TupleFamily& family, const BoundMode& mode, std::uint64_t seed) {
    validate_mode(family, mode);
    if (mode.permutations.kind == PermutationDistribution::Kind::monte_carlo)
        return bound_monte_carlo(family, mode, seed);
    return bound_exact(family, mode);
}

TupleFamily example1_family(int N) {
    if (N < 1) throw InvalidArgument("Example family needs N >= 1");
    std::vector<std::string> labels;
    for (int v = 0; v <= N; ++v) labels.push_back(std::to_string(v));
    std::vector<std::vector<int>> members;
    for (int i = 1; i <= N; ++i) members.push_back({i, i, 0});
    for (int i = 1; i <= N; ++i) members.push_back({i, 0, i});
    for (int i = 1; i <= N; ++i) members.push_back({0, i, i});
    return TupleFamily({labels, labels, labels}, std::move(members));
}

TupleFamily matchings_family(const BipartiteGraph& graph) {
    validate_graph(graph);
    if (graph.left_size != graph.right_size) throw InvalidArgument("matchings family needs equal sides");
    if (graph.right_size > 8) throw InvalidArgument("matchings family is limited to 8 + 8 vertices");
    const int n = graph.right_size;
    std::vector<std::vector<int>> incident(static_cast<std::size_t>(n));  // right vertex -> left neighbours
    auto edges = graph.edges;
    std::sort(edges.begin(), edges.end());
    for (const auto& [u, v] : edges) incident[static_cast<std::size_t>(v)].push_back(u);
    std::vector<std::vector<std::string>> components(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        for (int u : incident[static_cast<std::size_t>(v)])
            components[static_cast<std::size_t>(v)].push_back(std::to_string(u) + "-" + std::to_string(v));

    std::vector<std::vector<int>> members;
    std::vector<int> current(static_cast<std::size_t>(n));
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int v) -> void {
        if (v == n) {
            members.push_back(current);
            return;
        }
        const auto& nb = incident[static_cast<std::size_t>(v)];
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const auto u = static_cast<std::size_t>(nb[k]);
            if (used[u]) continue;
            used[u] = 1;
            current[static_cast<std::size_t>(v)] = static_cast<int>(k);
            self(self, v + 1);
            used[u] = 0;
        }
    };
    rec(rec, 0);
    return TupleFamily(std::move(components), std::move(members));
}

TupleFamily downsets_family(const TangledGrid& grid, std::size_t member_cap) {
    const int n = grid.n();
    const BigInt count = count_downsets(grid.poset, kMaxDownsetCountSize);
    if (count > BigInt(static_cast<unsigned long>(member_cap)))
        throw CapExceeded("grid has " + to_string(count) + " downsets, family cap is " + std::to_string(member_cap));

    std::vector<std::vector<int>> chains = grid.m_chains;
    chains.insert(chains.end(), grid.w_chains.begin(), grid.w_chains.end());
    std::vector<std::vector<std::string>> components;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        std::vector<std::string> labels{c < static_cast<std::size_t>(n) ? "a0" : "b0"};
        for (int e : chains[c]) labels.push_back(std::to_string(e));
        components.push_back(std::move(labels));
    }
    std::vector<std::vector<int>> members;
    for_each_downset(grid.poset, [&](const std::vector<char>& in) {
        std::vector<int> s;
        for (const auto& chain : chains) {
            int top = 0;
            for (std::size_t k = 0; k < chain.size(); ++k)
                if (in[static_cast<std::size_t>(chain[k])]) top = static_cast<int>(k) + 1;
            s.push_back(top);
        }
        members.push_back(std::move(s));
    });
    return TupleFamily(std::move(components), std::move(members));
}

BigInt count_perfect_matchings(const BipartiteGraph& graph) {
    validate_graph(graph);
    if (graph.left_size != graph.right_size) return BigInt(0);
    const int n = graph.right_size;
    if (n > 20) throw CapExceeded("perfect matching count is limited to 20 + 20 vertices");
    std::vector<std::uint32_t> nb(static_cast<std::size_t>(n), 0);
    for (const auto& [u, v] : graph.edges) nb[static_cast<std::size_t>(v)] |= std::uint32_t{1} << u;
    // dp[mask]: ways to match right vertices 0..popcount(mask)-1 onto left set `mask`
    std::vector<BigInt> dp(std::size_t{1} << n);
    dp[0] = 1;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        if (dp[mask] == 0) continue;
        const int v = std::popcount(mask);
        if (v == n) continue;
        for (std::uint32_t free = nb[static_cast<std::size_t>(v)] & ~mask; free; free &= free - 1)
            dp[mask | (free & (~free + 1))] += dp[mask];
    }
    return dp[(std::size_t{1} << n) - 1];
}

BregmanCheck bregman_check(const BipartiteGraph& graph) {
    BregmanCheck out;
    out.perfect_matchings = count_perfect_matchings(graph);
    std::vector<int> degree(static_cast<std::size_t>(graph.right_size), 0);
    for (const auto& e : graph.edges) ++degree[static_cast<std::size_t>(e.second)];
    bool isolated = false;
    for (int d : degree) {
        if (d == 0) {
            isolated = true;
            continue;
        }
        out.log_bound += std::lgamma(d + 1.0) / d;
    }
    if (isolated) {
        // both sides are 0
        out.log_bound = -HUGE_VAL;
        out.pass = out.perfect_matchings == 0;
        out.tight = out.pass;
        return out;
    }
    if (out.perfect_matchings == 0) {
        out.pass = true;
        return out;
    }
    const double log_perm = std::log(out.perfect_matchings.get_d());
    out.pass = log_perm <= out.log_bound + std::log1p(kBregmanRelativeTolerance);
    out.tight = std::abs(log_perm - out.log_bound) <= kBregmanRelativeTolerance * std::max(1.0, std::abs(out.log_bound));
    return out;
}

BipartiteGraph complete_bipartite(int n) {
    BipartiteGraph g{n, n, {}};
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) g.edges.emplace_back(u, v);
    return g;
}

BipartiteGraph random_bipartite(int n, double p, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("graph side must be positive");
    Rng rng(seed);
    const auto threshold = probability_threshold(p);
    BipartiteGraph g{n, n, {}};
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (rng.hit(threshold)) g.edges.emplace_back(u, v);
    return g;
}

} // namespace smcensus
