#include "smcensus/tangled_grid.hpp"

#include <algorithm>

#include "smcensus/errors.hpp"
#include "smcensus/instances.hpp"

namespace smcensus {

std::vector<std::string> tangled_grid_violations(const TangledGrid& grid) {
    std::vector<std::string> out;
    const int n = grid.n();
    const int size = grid.poset.size();
    if (static_cast<int>(grid.w_chains.size()) != n)
        out.push_back(std::to_string(n) + " m-chains but " + std::to_string(grid.w_chains.size()) + " w-chains");
    if (size != n * n)
        out.push_back("grid has " + std::to_string(size) + " elements, expected " + std::to_string(n * n));

    std::vector<int> m_of(static_cast<std::size_t>(size), -1);
    std::vector<int> w_of(static_cast<std::size_t>(size), -1);
    auto scan = [&](const std::vector<std::vector<int>>& chains, std::vector<int>& owner, const char* kind) {
        for (std::size_t c = 0; c < chains.size(); ++c) {
            const std::string label = std::string(kind) + "(" + std::to_string(c) + ")";
            if (static_cast<int>(chains[c].size()) != n)
                out.push_back(label + " has " + std::to_string(chains[c].size()) + " elements");
            for (std::size_t k = 0; k < chains[c].size(); ++k) {
                const int e = chains[c][k];
                if (e < 0 || e >= size) {
                    out.push_back(label + " lists out-of-range element " + std::to_string(e));
                    continue;
                }
                if (owner[static_cast<std::size_t>(e)] >= 0)
                    out.push_back("element " + std::to_string(e) + " on two " + kind + "-chains");
                owner[static_cast<std::size_t>(e)] = static_cast<int>(c);
                if (k > 0 && chains[c][k - 1] >= 0 && chains[c][k - 1] < size && !grid.poset.less(chains[c][k - 1], e))
                    out.push_back(label + " not increasing at position " + std::to_string(k));
            }
        }
        for (int e = 0; e < size; ++e)
            if (owner[static_cast<std::size_t>(e)] < 0)
                out.push_back("element " + std::to_string(e) + " on no " + kind + "-chain");
    };
    scan(grid.m_chains, m_of, "m");
    scan(grid.w_chains, w_of, "w");
    if (!out.empty()) return out;

    std::vector<int> meet(static_cast<std::size_t>(n * n), 0);
    for (int e = 0; e < size; ++e) ++meet[static_cast<std::size_t>(m_of[static_cast<std::size_t>(e)] * n + w_of[static_cast<std::size_t>(e)])];
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (meet[static_cast<std::size_t>(u * n + v)] != 1)
                out.push_back("m(" + std::to_string(u) + ") and w(" + std::to_string(v) + ") meet in " +
                              std::to_string(meet[static_cast<std::size_t>(u * n + v)]) + " elements");
    return out;
}

TangledGrid embed_in_tangled_grid(const RotationPoset& poset, int n) {
    if (n < 1) throw InvalidArgument("grid side must be positive");
    const int r = poset.size();
    if (static_cast<int>(poset.leq.size()) != r) throw InvalidArgument("rotation poset relation has wrong size");

    std::vector<std::vector<int>> m_chains(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> w_chains(static_cast<std::size_t>(n));
    std::vector<char> meets(static_cast<std::size_t>(n * n), 0);
    for (int e = 0; e < r; ++e) {
        const Edge first = poset.elements[static_cast<std::size_t>(e)].edge(0);
        if (first.job < 0 || first.job >= n || first.applicant < 0 || first.applicant >= n)
            throw InvalidArgument("rotation " + std::to_string(e) + " uses a vertex outside side size " +
                                  std::to_string(n));
        auto& seen = meets[static_cast<std::size_t>(first.job * n + first.applicant)];
        if (seen) throw InvalidArgument("edge of rotation " + std::to_string(e) + " appears in another rotation");
        seen = 1;
        // index order is a linear extension, so appending keeps chains bottom to top
        m_chains[static_cast<std::size_t>(first.job)].push_back(e);
        w_chains[static_cast<std::size_t>(first.applicant)].push_back(e);
    }
    for (const auto& chains : {&m_chains, &w_chains})
        for (const auto& chain : *chains)
            for (std::size_t k = 1; k < chain.size(); ++k)
                if (!poset.leq[static_cast<std::size_t>(chain[k - 1])][static_cast<std::size_t>(chain[k])])
                    throw InvalidArgument("rotations sharing a vertex are not comparable");

    const int size = n * n;
    Relation leq(static_cast<std::size_t>(size), std::vector<char>(static_cast<std::size_t>(size), 0));
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = poset.leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];

    int next = r;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (meets[static_cast<std::size_t>(u * n + v)]) continue;
            const int e = next++;
            for (int a = 0; a < r; ++a) leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(e)] = 1;
            // below e: the current tops of both chains and everything under them
            for (int top : {m_chains[static_cast<std::size_t>(u)].empty() ? -1 : m_chains[static_cast<std::size_t>(u)].back(),
                            w_chains[static_cast<std::size_t>(v)].empty() ? -1 : w_chains[static_cast<std::size_t>(v)].back()}) {
                if (top < r) continue;
                for (int a = 0; a < e; ++a)
                    if (leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(top)])
                        leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(e)] = 1;
            }
            leq[static_cast<std::size_t>(e)][static_cast<std::size_t>(e)] = 1;
            m_chains[static_cast<std::size_t>(u)].push_back(e);
            w_chains[static_cast<std::size_t>(v)].push_back(e);
        }
    if (next != size) throw InvalidArgument("rotation poset does not fit an " + std::to_string(n) + "x" + std::to_string(n) + " grid");
    for (int a = 0; a < size; ++a) leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = 1;

    TangledGrid grid{FinitePoset::from_relation(leq), std::move(m_chains), std::move(w_chains)};
    return grid;
}

TangledGrid grid_diamond(int n) {
    if (n < 1) throw InvalidArgument("grid side must be positive");
    TangledGrid grid;
    grid.poset = product_poset(n, n);
    grid.m_chains.assign(static_cast<std::size_t>(n), {});
    grid.w_chains.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            grid.m_chains[static_cast<std::size_t>(i)].push_back(i * n + j);
            grid.w_chains[static_cast<std::size_t>(j)].push_back(i * n + j);
        }
    return grid;
}

TangledGrid random_tangled_grid(int n, std::uint64_t seed, std::size_t state_cap) {
    return embed_in_tangled_grid(build_rotation_poset(random_instance(n, seed), state_cap), n);
}

} // namespace smcensus
