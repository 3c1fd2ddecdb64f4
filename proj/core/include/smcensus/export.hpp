#pragma once

#include <string>

#include "smcensus/counting_lens.hpp"
#include "smcensus/rotations.hpp"
#include "smcensus/tangled_grid.hpp"

namespace smcensus {

// Compact single-line JSON documents.

// {"n", "base", "elements": [{"id", "edges": [[u, v], ...]}], "covers": [[a, b], ...],
//  "m_chains": [[...]], "w_chains": [[...]], "lattice_states"}
std::string to_json(const RotationPoset& poset);

// {"n", "size", "covers", "m_chains", "w_chains"}
std::string to_json(const TangledGrid& grid);

// {"variant", "exact", "value", "per_component", "log_size", "holds",
//  "product"?, "stderr"?, "samples"?, "seed"?}
std::string to_json(const BoundResult& result);

} // namespace smcensus
