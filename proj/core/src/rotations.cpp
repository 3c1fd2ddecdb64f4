#include "smcensus/rotations.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "smcensus/errors.hpp"

namespace smcensus {

Rotation::Rotation(std::vector<Edge> cyclic_edges) : edges_(std::move(cyclic_edges)) {
    if (edges_.size() < 2) throw InvalidArgument("a rotation needs at least two edges");
    std::set<int> jobs;
    std::set<int> applicants;
    for (const auto& e : edges_) {
        if (!jobs.insert(e.job).second) throw InvalidArgument("rotation repeats job " + std::to_string(e.job));
        if (!applicants.insert(e.applicant).second)
            throw InvalidArgument("rotation repeats applicant " + std::to_string(e.applicant));
    }
    const auto first = std::min_element(edges_.begin(), edges_.end(),
                                        [](const Edge& a, const Edge& b) { return a.job < b.job; });
    std::rotate(edges_.begin(), first, edges_.end());
}

std::string to_string(const Rotation& rotation) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < rotation.size(); ++i) {
        if (i) out << ',';
        out << '(' << rotation.edges()[i].job << ',' << rotation.edges()[i].applicant << ')';
    }
    out << ')';
    return out.str();
}

namespace {

std::vector<Rotation> exposed_unchecked(const PreferenceProfile& profile, const Matching& matching) {
    const int n = profile.n();
    const auto inv = matching.inverse();
    // next_job[u]: partner of the first applicant below mu(u) on u's list who
    // prefers u to her own partner; -1 if there is none.
    std::vector<int> next_job(static_cast<std::size_t>(n), -1);
    for (int u = 0; u < n; ++u) {
        const auto& prefs = profile.job_prefs()[static_cast<std::size_t>(u)];
        for (int pos = profile.job_rank(u, matching.applicant_of(u)) + 1; pos < n; ++pos) {
            const int w = prefs[static_cast<std::size_t>(pos)];
            if (profile.applicant_prefers(w, u, inv[static_cast<std::size_t>(w)])) {
                next_job[static_cast<std::size_t>(u)] = inv[static_cast<std::size_t>(w)];
                break;
            }
        }
    }

    enum : char { fresh, on_path, done };
    std::vector<char> state(static_cast<std::size_t>(n), fresh);
    std::vector<Rotation> out;
    for (int start = 0; start < n; ++start) {
        std::vector<int> path;
        int u = start;
        while (u >= 0 && state[static_cast<std::size_t>(u)] == fresh) {
            state[static_cast<std::size_t>(u)] = on_path;
            path.push_back(u);
            u = next_job[static_cast<std::size_t>(u)];
        }
        if (u >= 0 && state[static_cast<std::size_t>(u)] == on_path) {
            std::vector<Edge> edges;
            const auto from = std::find(path.begin(), path.end(), u);
            for (auto it = from; it != path.end(); ++it) edges.push_back({*it, matching.applicant_of(*it)});
            out.emplace_back(std::move(edges));
        }
        for (int p : path) state[static_cast<std::size_t>(p)] = done;
    }
    std::sort(out.begin(), out.end());
    return out;
}

Matching apply_rotation(const Matching& matching, const Rotation& rotation) {
    auto assignment = matching.assignment();
    const auto k = rotation.size();
    for (std::size_t i = 0; i < k; ++i)
        assignment[static_cast<std::size_t>(rotation.edge(i).job)] = rotation.edge(i + 1).applicant;
    return Matching(std::move(assignment));
}

} // namespace

std::vector<Rotation> exposed_rotations(const PreferenceProfile& profile, const Matching& matching) {
    if (!is_stable(profile, matching)) throw InvalidArgument("exposed_rotations needs a stable matching");
    return exposed_unchecked(profile, matching);
}

Matching eliminate(const PreferenceProfile& profile, const Matching& matching, const Rotation& rotation) {
    for (const auto& e : rotation.edges()) {
        if (e.job < 0 || e.job >= matching.n() || matching.applicant_of(e.job) != e.applicant)
            throw InvalidArgument("rotation " + to_string(rotation) + " is not exposed: edge not in matching");
    }
    const auto exposed = exposed_rotations(profile, matching);
    if (!std::binary_search(exposed.begin(), exposed.end(), rotation))
        throw InvalidArgument("rotation " + to_string(rotation) + " is not exposed in the matching");
    Matching result = apply_rotation(matching, rotation);
#ifndef NDEBUG
    if (!is_stable(profile, result)) throw std::logic_error("elimination produced an unstable matching");
#endif
    return result;
}

RotationPoset build_rotation_poset(const PreferenceProfile& profile, std::size_t state_cap) {
    const int n = profile.n();
    RotationPoset poset;
    poset.n = n;
    poset.base = gale_shapley(profile, Side::jobs);

    std::map<std::vector<int>, std::size_t> seen;
    std::vector<std::vector<int>> eliminated;  // per state, sorted rotation ids
    std::map<Rotation, int> ids;
    std::vector<Rotation> found;

    std::deque<std::pair<Matching, std::size_t>> queue;
    seen.emplace(poset.base.assignment(), 0);
    eliminated.emplace_back();
    queue.emplace_back(poset.base, 0);

    while (!queue.empty()) {
        auto [matching, state] = std::move(queue.front());
        queue.pop_front();
        for (auto& rotation : exposed_unchecked(profile, matching)) {
            auto [it, inserted] = ids.emplace(rotation, static_cast<int>(found.size()));
            if (inserted) found.push_back(rotation);
            const int id = it->second;

            auto next_set = eliminated[state];
            next_set.insert(std::upper_bound(next_set.begin(), next_set.end(), id), id);
            Matching next = apply_rotation(matching, rotation);
#ifndef NDEBUG
            if (!is_stable(profile, next)) throw std::logic_error("elimination produced an unstable matching");
#endif
            auto [pos, fresh] = seen.emplace(next.assignment(), eliminated.size());
            if (fresh) {
                if (eliminated.size() >= state_cap)
                    throw CapExceeded("stable-matching lattice exceeds " + std::to_string(state_cap) + " states");
                eliminated.push_back(std::move(next_set));
                queue.emplace_back(std::move(next), pos->second);
            } else if (eliminated[pos->second] != next_set) {
                throw std::logic_error("one stable matching reached with two different eliminated sets");
            }
        }
    }

    const std::size_t r = found.size();
    const std::size_t words = (r + 63) / 64;
    std::vector<std::vector<std::uint64_t>> down(r, std::vector<std::uint64_t>(words, ~std::uint64_t{0}));
    std::vector<std::uint64_t> bits(words);
    for (const auto& set : eliminated) {
        std::fill(bits.begin(), bits.end(), 0);
        for (int id : set) bits[static_cast<std::size_t>(id) / 64] |= std::uint64_t{1} << (id % 64);
        for (int id : set)
            for (std::size_t w = 0; w < words; ++w) down[static_cast<std::size_t>(id)][w] &= bits[w];
    }
    auto down_size = [&](std::size_t id) {
        int c = 0;
        for (auto w : down[id]) c += std::popcount(w);
        return c;
    };

    // Renumber so that index order is a linear extension.
    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const int da = down_size(a);
        const int db = down_size(b);
        return da != db ? da < db : found[a] < found[b];
    });
    for (std::size_t i = 0; i < r; ++i) poset.elements.push_back(found[order[i]]);
    poset.leq.assign(r, std::vector<char>(r, 0));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            const std::size_t old_a = order[a];
            poset.leq[a][b] = (down[order[b]][old_a / 64] >> (old_a % 64)) & 1U;
        }

    poset.m_chains.assign(static_cast<std::size_t>(n), {});
    poset.w_chains.assign(static_cast<std::size_t>(n), {});
    for (std::size_t e = 0; e < r; ++e)
        for (const auto& edge : poset.elements[e].edges()) {
            poset.m_chains[static_cast<std::size_t>(edge.job)].push_back(static_cast<int>(e));
            poset.w_chains[static_cast<std::size_t>(edge.applicant)].push_back(static_cast<int>(e));
        }
    poset.lattice_states = eliminated.size();
    return poset;
}

bool StructureReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ClaimCheck& c) { return c.pass; });
}

const ClaimCheck* StructureReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

namespace {

constexpr std::size_t kMaxWitnesses = 5;

void fail(ClaimCheck& check, const std::string& witness) {
    check.pass = false;
    if (check.witnesses.size() < kMaxWitnesses) check.witnesses.push_back(witness);
}

// Index of `element` in `chain`, or -1.
int position(const std::vector<int>& chain, int element) {
    const auto it = std::find(chain.begin(), chain.end(), element);
    return it == chain.end() ? -1 : static_cast<int>(it - chain.begin());
}

} // namespace

StructureReport check_structure(const RotationPoset& poset) {
    StructureReport report;
    const auto r = poset.elements.size();
    auto leq = [&](int a, int b) { return poset.leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0; };

    ClaimCheck order{"leq_partial_order", "leq is reflexive, antisymmetric and transitive", true, {}};
    if (poset.leq.size() != r) {
        fail(order, "relation has " + std::to_string(poset.leq.size()) + " rows for " + std::to_string(r) + " elements");
    } else {
        for (std::size_t a = 0; a < r; ++a) {
            if (poset.leq[a].size() != r) fail(order, "row " + std::to_string(a) + " has wrong length");
        }
    }
    if (order.pass) {
        for (int a = 0; a < static_cast<int>(r); ++a) {
            if (!leq(a, a)) fail(order, "not reflexive at " + std::to_string(a));
            for (int b = 0; b < static_cast<int>(r); ++b) {
                if (a != b && leq(a, b) && leq(b, a))
                    fail(order, "antisymmetry fails for " + std::to_string(a) + ", " + std::to_string(b));
                if (!leq(a, b)) continue;
                for (int c = 0; c < static_cast<int>(r); ++c)
                    if (leq(b, c) && !leq(a, c))
                        fail(order, "transitivity fails for " + std::to_string(a) + " <= " + std::to_string(b) +
                                        " <= " + std::to_string(c));
            }
        }
    }
    report.checks.push_back(order);
    if (!order.pass) return report;

    ClaimCheck chains{"vertex_chains_totally_ordered",
                      "rotations involving a fixed vertex form a chain, listed bottom to top", true, {}};
    auto check_chain = [&](const std::vector<int>& chain, const std::string& label) {
        for (std::size_t i = 0; i < chain.size(); ++i)
            for (std::size_t j = i + 1; j < chain.size(); ++j)
                if (!leq(chain[i], chain[j]))
                    fail(chains, label + ": elements " + std::to_string(chain[i]) + " and " + std::to_string(chain[j]) +
                                     " not ordered");
    };
    for (std::size_t u = 0; u < poset.m_chains.size(); ++u) check_chain(poset.m_chains[u], "M(" + std::to_string(u) + ")");
    for (std::size_t v = 0; v < poset.w_chains.size(); ++v) check_chain(poset.w_chains[v], "W(" + std::to_string(v) + ")");
    report.checks.push_back(chains);

    ClaimCheck edges{"edge_in_at_most_one_rotation", "each (job, applicant) edge appears in at most one rotation", true, {}};
    std::map<Edge, std::size_t> edge_owner;
    for (std::size_t e = 0; e < r; ++e)
        for (const auto& edge : poset.elements[e].edges()) {
            auto [it, inserted] = edge_owner.emplace(edge, e);
            if (!inserted)
                fail(edges, "edge (" + std::to_string(edge.job) + "," + std::to_string(edge.applicant) +
                                ") in rotations " + std::to_string(it->second) + " and " + std::to_string(e));
        }
    report.checks.push_back(edges);

    ClaimCheck balance{"chain_counts_balanced", "#m-chains = #w-chains >= 2 at every rotation", true, {}};
    std::vector<int> m_count(r, 0);
    std::vector<int> w_count(r, 0);
    for (const auto& chain : poset.m_chains)
        for (int e : chain) ++m_count[static_cast<std::size_t>(e)];
    for (const auto& chain : poset.w_chains)
        for (int e : chain) ++w_count[static_cast<std::size_t>(e)];
    for (std::size_t e = 0; e < r; ++e)
        if (m_count[e] != w_count[e] || m_count[e] < 2)
            fail(balance, "rotation " + std::to_string(e) + " on " + std::to_string(m_count[e]) + " m-chains and " +
                              std::to_string(w_count[e]) + " w-chains");
    report.checks.push_back(balance);

    // Pairings: at rotation (u_i v_i), M(u_i) is paired with W(v_i) and W(v_{i+1}).
    std::map<std::pair<int, int>, std::vector<int>> paired_at;
    for (std::size_t e = 0; e < r; ++e) {
        const auto& rot = poset.elements[e];
        for (std::size_t i = 0; i < rot.size(); ++i) {
            paired_at[{rot.edge(i).job, rot.edge(i).applicant}].push_back(static_cast<int>(e));
            paired_at[{rot.edge(i).job, rot.edge(i + 1).applicant}].push_back(static_cast<int>(e));
        }
    }
    auto w_partners = [&](int e, int job) {  // applicants paired with M(job) at rotation e
        std::set<int> out;
        const auto& rot = poset.elements[static_cast<std::size_t>(e)];
        for (std::size_t i = 0; i < rot.size(); ++i)
            if (rot.edge(i).job == job) {
                out.insert(rot.edge(i).applicant);
                out.insert(rot.edge(i + 1).applicant);
            }
        return out;
    };
    auto m_partners = [&](int e, int applicant) {  // jobs paired with W(applicant) at rotation e
        std::set<int> out;
        const auto& rot = poset.elements[static_cast<std::size_t>(e)];
        for (std::size_t i = 0; i < rot.size(); ++i)
            if (rot.edge(i + 1).applicant == applicant) {
                out.insert(rot.edge(i).job);
                out.insert(rot.edge(i + 1).job);
            }
        return out;
    };

    ClaimCheck consecutive{"pairing_consecutive",
                           "a paired (M(u), W(v)) meets at one other rotation consecutive on both chains, "
                           "or at the bottom of both or the top of both", true, {}};
    ClaimCheck exclusive{"pairing_exclusive",
                         "no chain of a doubly paired (M(u), W(v)) is paired with another chain at both rotations", true, {}};
    for (const auto& [pair, at] : paired_at) {
        const auto [u, v] = pair;
        const std::string label = "(M(" + std::to_string(u) + "), W(" + std::to_string(v) + "))";
        if (static_cast<std::size_t>(u) >= poset.m_chains.size() || static_cast<std::size_t>(v) >= poset.w_chains.size()) {
            fail(consecutive, label + ": vertex out of range");
            continue;
        }
        const auto& mc = poset.m_chains[static_cast<std::size_t>(u)];
        const auto& wc = poset.w_chains[static_cast<std::size_t>(v)];
        if (at.size() > 2) {
            fail(consecutive, label + " paired at " + std::to_string(at.size()) + " rotations");
            continue;
        }
        if (at.size() == 2) {
            const int pm0 = position(mc, at[0]);
            const int pm1 = position(mc, at[1]);
            const int pw0 = position(wc, at[0]);
            const int pw1 = position(wc, at[1]);
            if (pm0 < 0 || pm1 < 0 || pw0 < 0 || pw1 < 0 || std::abs(pm0 - pm1) != 1 || std::abs(pw0 - pw1) != 1)
                fail(consecutive, label + " paired at " + std::to_string(at[0]) + " and " + std::to_string(at[1]) +
                                      " which are not consecutive on both chains");
            auto mu = w_partners(at[0], u);
            auto mu2 = w_partners(at[1], u);
            std::vector<int> common_w;
            std::set_intersection(mu.begin(), mu.end(), mu2.begin(), mu2.end(), std::back_inserter(common_w));
            auto wv = m_partners(at[0], v);
            auto wv2 = m_partners(at[1], v);
            std::vector<int> common_m;
            std::set_intersection(wv.begin(), wv.end(), wv2.begin(), wv2.end(), std::back_inserter(common_m));
            if (common_w != std::vector<int>{v} || common_m != std::vector<int>{u})
                fail(exclusive, label + ": a chain is paired with another chain at both rotations " +
                                    std::to_string(at[0]) + " and " + std::to_string(at[1]));
        } else {
            const int pm = position(mc, at[0]);
            const int pw = position(wc, at[0]);
            const bool bottom = pm == 0 && pw == 0;
            const bool top = pm >= 0 && pw >= 0 && pm + 1 == static_cast<int>(mc.size()) &&
                             pw + 1 == static_cast<int>(wc.size());
            if (!bottom && !top)
                fail(consecutive, label + " paired only at rotation " + std::to_string(at[0]) +
                                      ", which is neither bottom of both nor top of both chains");
        }
    }
    report.checks.push_back(consecutive);
    report.checks.push_back(exclusive);

    ClaimCheck length{"chain_length_bound", "every m-chain and w-chain has at most n - 1 elements", true, {}};
    auto check_len = [&](const std::vector<std::vector<int>>& all, const char* kind) {
        for (std::size_t c = 0; c < all.size(); ++c)
            if (static_cast<int>(all[c].size()) > std::max(poset.n - 1, 0))
                fail(length, std::string(kind) + "(" + std::to_string(c) + ") has " + std::to_string(all[c].size()) +
                                 " elements");
    };
    check_len(poset.m_chains, "M");
    check_len(poset.w_chains, "W");
    report.checks.push_back(length);
    return report;
}

std::vector<Matching> matchings_from_downsets(const PreferenceProfile& profile, const RotationPoset& poset) {
    const auto order = poset.as_finite_poset();
    std::vector<Matching> out;
    for_each_downset(order, [&](const std::vector<char>& in) {
        Matching m = poset.base;
        // index order is a linear extension, so every rotation is exposed when reached
        for (std::size_t e = 0; e < in.size(); ++e)
            if (in[e]) m = eliminate(profile, m, poset.elements[e]);
        out.push_back(std::move(m));
    });
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw std::logic_error("two downsets of the rotation poset give the same stable matching");
    return out;
}

std::vector<Matching> enumerate_stable_via_rotations(const PreferenceProfile& profile, std::size_t state_cap) {
    return matchings_from_downsets(profile, build_rotation_poset(profile, state_cap));
}

} // namespace smcensus
