#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smcensus/poset.hpp"
#include "smcensus/rotations.hpp"

namespace smcensus {

// Poset with two chain decompositions (m-chains, w-chains) of n chains each,
// where every m-chain meets every w-chain in exactly one element. Chains list
// element indices bottom to top.
struct TangledGrid {
    FinitePoset poset;
    std::vector<std::vector<int>> m_chains;
    std::vector<std::vector<int>> w_chains;

    int n() const { return static_cast<int>(m_chains.size()); }
};

// Empty when the grid satisfies every invariant; otherwise one message per
// violation found.
std::vector<std::string> tangled_grid_violations(const TangledGrid& grid);
inline bool is_valid_tangled_grid(const TangledGrid& grid) { return tangled_grid_violations(grid).empty(); }

// Each rotation keeps only the chains of its first edge (u0, v0); then every
// m-chain / w-chain pair that does not meet gets a new element placed above
// all rotations. New elements sharing a chain are ordered by creation (u
// major, v minor) so each chain stays totally ordered. Elements 0..r-1 are
// the rotations in poset order; the rest are the padding.
// Throws InvalidArgument if the poset is inconsistent with side size n.
TangledGrid embed_in_tangled_grid(const RotationPoset& poset, int n);

// n x n product order: element (i, j) is i * n + j, m-chains are rows and
// w-chains are columns.
TangledGrid grid_diamond(int n);

// Embedding of the rotation poset of random_instance(n, seed).
TangledGrid random_tangled_grid(int n, std::uint64_t seed, std::size_t state_cap = kDefaultStateCap);

} // namespace smcensus
