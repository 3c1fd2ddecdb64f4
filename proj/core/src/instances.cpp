#include "smcensus/instances.hpp"

#include "json.hpp"

#include <istream>
#include <numeric>
#include <sstream>

#include "smcensus/errors.hpp"
#include "smcensus/rng.hpp"

namespace smcensus {

namespace {

void validate_rows(const PreferenceRows& rows, int n, const char* side) {
    if (static_cast<int>(rows.size()) != n)
        throw InvalidArgument(std::string(side) + " has " + std::to_string(rows.size()) + " rows, expected n = " +
                              std::to_string(n));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (static_cast<int>(row.size()) != n)
            throw InvalidArgument(std::string(side) + " row " + std::to_string(r) + " has length " +
                                  std::to_string(row.size()) + ", expected n = " + std::to_string(n));
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        for (int x : row) {
            if (x < 0 || x >= n || seen[static_cast<std::size_t>(x)])
                throw InvalidArgument(std::string(side) + " row " + std::to_string(r) + " not a permutation");
            seen[static_cast<std::size_t>(x)] = 1;
        }
    }
}

} // namespace

PreferenceProfile::PreferenceProfile(PreferenceRows job_prefs, PreferenceRows applicant_prefs)
    : n_(static_cast<int>(job_prefs.size())),
      job_prefs_(std::move(job_prefs)),
      applicant_prefs_(std::move(applicant_prefs)) {
    if (n_ < 1) throw InvalidArgument("instance needs n >= 1");
    validate_rows(job_prefs_, n_, "job_prefs");
    validate_rows(applicant_prefs_, n_, "applicant_prefs");
    const auto cells = static_cast<std::size_t>(n_) * n_;
    job_rank_.resize(cells);
    applicant_rank_.resize(cells);
    for (int a = 0; a < n_; ++a) {
        for (int pos = 0; pos < n_; ++pos) {
            job_rank_[idx(a, job_prefs_[a][pos])] = pos;
            applicant_rank_[idx(a, applicant_prefs_[a][pos])] = pos;
        }
    }
}

PreferenceProfile parse_instance(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("malformed instance JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidArgument("instance must be a JSON object");
    for (const char* key : {"n", "job_prefs", "applicant_prefs"})
        if (!doc.contains(key)) throw InvalidArgument(std::string("instance is missing key \"") + key + "\"");
    if (!doc["n"].is_number_integer()) throw InvalidArgument("\"n\" must be an integer");
    const auto n = doc["n"].get<long long>();
    if (n < 1) throw InvalidArgument("\"n\" must be >= 1");

    auto read_rows = [&](const char* key) {
        const auto& arr = doc[key];
        if (!arr.is_array()) throw InvalidArgument(std::string("\"") + key + "\" must be an array");
        PreferenceRows rows;
        for (std::size_t r = 0; r < arr.size(); ++r) {
            const auto& row = arr[r];
            if (!row.is_array())
                throw InvalidArgument(std::string(key) + " row " + std::to_string(r) + " is not an array");
            std::vector<int> out;
            for (const auto& x : row) {
                if (!x.is_number_integer())
                    throw InvalidArgument(std::string(key) + " row " + std::to_string(r) + " has a non-integer entry");
                out.push_back(x.get<int>());
            }
            rows.push_back(std::move(out));
        }
        return rows;
    };
    auto jobs = read_rows("job_prefs");
    auto applicants = read_rows("applicant_prefs");
    if (static_cast<long long>(jobs.size()) != n)
        throw InvalidArgument("job_prefs has " + std::to_string(jobs.size()) + " rows but n = " + std::to_string(n));
    return PreferenceProfile(std::move(jobs), std::move(applicants));
}

PreferenceProfile parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

std::string serialize_instance(const PreferenceProfile& profile) {
    nlohmann::ordered_json doc;
    doc["n"] = profile.n();
    doc["job_prefs"] = profile.job_prefs();
    doc["applicant_prefs"] = profile.applicant_prefs();
    return doc.dump();
}

PreferenceProfile random_instance(int n, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("random_instance needs n >= 1");
    Rng rng(seed);
    auto draw = [&] {
        PreferenceRows rows(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
        for (auto& row : rows) {
            std::iota(row.begin(), row.end(), 0);
            rng.shuffle(std::span<int>(row));
        }
        return rows;
    };
    auto jobs = draw();
    auto applicants = draw();
    return PreferenceProfile(std::move(jobs), std::move(applicants));
}

PreferenceProfile instance_I2() { return PreferenceProfile({{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}); }

} // namespace smcensus
