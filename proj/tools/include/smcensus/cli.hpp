#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace smcensus {

// One JSON object per check: {"check": id, "pass": bool, ...body}.
struct CheckRecord {
    std::string id;
    bool pass = false;
    nlohmann::json body = nlohmann::json::object();

    std::string to_line() const;
};

struct RunConfig {
    std::string command;
    std::uint64_t seed = 0;
    int max_n = 7;                          // largest instance / grid side used
    std::size_t samples = 0;                // 0: each check's own default
    std::int64_t truncation = 10'000'000;   // series truncation K
    std::optional<std::string> input_path;
    std::optional<std::string> output_path;
    std::string method = "both";            // enumerate: brute | rotations | both
    std::string series;                     // bounds / series / simulate selector
    std::string suite = "all";              // verify: all, or comma list of criterion numbers
    bool inject_fault = false;              // negative control for the bijection criterion
};

// Number of acceptance criteria and their check ids (c01_... c14_...).
inline constexpr int kCriterionCount = 14;
const std::vector<std::string>& criterion_ids();

// Runs one criterion (1-based). Failures are report entries, never thrown.
CheckRecord run_criterion(int number, const RunConfig& config);

// Every selected criterion, sorted by check id.
std::vector<CheckRecord> run_verify_suite(const RunConfig& config);

// Subcommands other than verify. Throw InvalidArgument on bad options.
std::vector<CheckRecord> run_enumerate(const RunConfig& config);
std::vector<CheckRecord> run_rotations(const RunConfig& config);
std::vector<CheckRecord> run_grids(const RunConfig& config);
std::vector<CheckRecord> run_bounds(const RunConfig& config);
std::vector<CheckRecord> run_series(const RunConfig& config);
std::vector<CheckRecord> run_simulate(const RunConfig& config);

// Dispatch on config.command, sort by id, write JSON lines to `out`.
// Returns 0 if every record passes, 1 otherwise.
int execute(const RunConfig& config, std::ostream& out);

// Full argv handling: usage errors give exit code 2.
int run(int argc, char** argv);

} // namespace smcensus
