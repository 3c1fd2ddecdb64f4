#include "smcensus/export.hpp"

#include "json.hpp"

namespace smcensus {

using nlohmann::json;

namespace {

json covers_of(const FinitePoset& poset) {
    json out = json::array();
    for (const auto& [a, b] : poset.covers()) out.push_back({a, b});
    return out;
}

} // namespace

std::string to_json(const RotationPoset& poset) {
    json elements = json::array();
    for (int id = 0; id < poset.size(); ++id) {
        json edges = json::array();
        for (const Edge& e : poset.elements[static_cast<std::size_t>(id)].edges()) edges.push_back({e.job, e.applicant});
        elements.push_back({{"id", id}, {"edges", edges}});
    }
    json doc;
    doc["n"] = poset.n;
    doc["base"] = poset.base.assignment();
    doc["elements"] = elements;
    doc["covers"] = covers_of(poset.as_finite_poset());
    doc["m_chains"] = poset.m_chains;
    doc["w_chains"] = poset.w_chains;
    doc["lattice_states"] = poset.lattice_states;
    return doc.dump();
}

std::string to_json(const TangledGrid& grid) {
    json doc;
    doc["n"] = grid.n();
    doc["size"] = grid.poset.size();
    doc["covers"] = covers_of(grid.poset);
    doc["m_chains"] = grid.m_chains;
    doc["w_chains"] = grid.w_chains;
    return doc.dump();
}

std::string to_json(const BoundResult& result) {
    json doc;
    doc["variant"] = to_string(result.variant);
    doc["exact"] = result.exact;
    doc["value"] = result.value;
    doc["per_component"] = result.per_component;
    doc["log_size"] = result.log_size;
    doc["holds"] = result.holds;
    if (result.product) doc["product"] = to_string(*result.product);
    if (result.std_error) doc["stderr"] = *result.std_error;
    if (result.samples) doc["samples"] = *result.samples;
    if (result.seed) doc["seed"] = *result.seed;
    return doc.dump();
}

} // namespace smcensus
