#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "smcensus/instances.hpp"
#include "smcensus/matchings.hpp"
#include "smcensus/poset.hpp"

namespace smcensus {

struct Edge {
    int job;
    int applicant;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Cyclic list of matched edges (u_0 v_0, ..., u_{k-1} v_{k-1}); eliminating it
// re-matches u_i with v_{i+1}. Stored rotated so the smallest job comes first,
// which makes equal rotations compare equal.
class Rotation {
public:
    // Throws InvalidArgument if k < 2 or a job/applicant repeats.
    explicit Rotation(std::vector<Edge> cyclic_edges);

    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t size() const { return edges_.size(); }
    const Edge& edge(std::size_t i) const { return edges_[i % edges_.size()]; }

    friend auto operator<=>(const Rotation&, const Rotation&) = default;

private:
    std::vector<Edge> edges_;
};

std::string to_string(const Rotation& rotation);

// Rotations exposed in a stable matching, canonical form, sorted.
// Throws InvalidArgument if the matching is not stable.
std::vector<Rotation> exposed_rotations(const PreferenceProfile& profile, const Matching& matching);

// Throws InvalidArgument unless `rotation` is exposed in `matching`.
Matching eliminate(const PreferenceProfile& profile, const Matching& matching, const Rotation& rotation);

// Rotation poset of an instance. Element indices form a linear extension of
// the order; chains list element indices bottom to top.
struct RotationPoset {
    int n = 0;
    Matching base;                            // job-optimal stable matching
    std::vector<Rotation> elements;
    Relation leq;                             // leq[a][b]: a must be eliminated before b (or a == b)
    std::vector<std::vector<int>> m_chains;   // per job
    std::vector<std::vector<int>> w_chains;   // per applicant
    std::size_t lattice_states = 0;           // stable matchings reached while building

    int size() const { return static_cast<int>(elements.size()); }
    FinitePoset as_finite_poset() const { return FinitePoset::from_relation(leq); }
};

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

// Breadth-first search of the stable-matching lattice from the job-optimal
// matching; rho <= rho' iff every reached eliminated-set containing rho'
// contains rho. Throws CapExceeded beyond `state_cap` lattice states.
RotationPoset build_rotation_poset(const PreferenceProfile& profile, std::size_t state_cap = kDefaultStateCap);

struct ClaimCheck {
    std::string id;
    std::string description;
    bool pass = true;
    std::vector<std::string> witnesses;  // first few violations
};

struct StructureReport {
    std::vector<ClaimCheck> checks;
    bool all_pass() const;
    const ClaimCheck* find(const std::string& id) const;
};

// Structural properties every rotation poset has:
//   leq_partial_order              leq is reflexive, antisymmetric, transitive
//   vertex_chains_totally_ordered  rotations through one vertex form a chain
//   edge_in_at_most_one_rotation   no (job, applicant) edge is in two rotations
//   chain_counts_balanced          #m-chains = #w-chains >= 2 at every element
//   pairing_consecutive            a paired (M(u), W(v)) meets at exactly one other
//                                  rotation, consecutive on both chains, or sits
//                                  at the bottom of both or the top of both
//   pairing_exclusive              neither chain of such a pair is paired with
//                                  some other chain at both rotations
//   chain_length_bound             every chain has at most n - 1 elements
// Failures are reported, never thrown.
StructureReport check_structure(const RotationPoset& poset);

// Every stable matching, obtained by eliminating each downset of the rotation
// poset from the base matching. Sorted lexicographically. Throws
// std::logic_error if two downsets produce the same matching.
std::vector<Matching> enumerate_stable_via_rotations(const PreferenceProfile& profile,
                                                     std::size_t state_cap = kDefaultStateCap);

// Same, for an already built poset.
std::vector<Matching> matchings_from_downsets(const PreferenceProfile& profile, const RotationPoset& poset);

} // namespace smcensus
