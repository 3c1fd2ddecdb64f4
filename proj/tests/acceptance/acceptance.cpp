// Runs every acceptance criterion with the default configuration and prints
// one PASS/FAIL line per criterion. Exit status is 0 when the only failures
// are the ones listed in kKnownFailures, and nonzero on any other failure or
// on an unexpected pass of a listed criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>

#include "smcensus/cli.hpp"

namespace {

// Criterion number -> reason. The failure is reproduced on every run; it is
// not masked, only expected.
const std::map<int, std::string> kKnownFailures = {
    {11, "sm series constant: certified enclosure lies near 0.69398, above the 0.6331 it is compared with"},
};

} // namespace

int main(int argc, char** argv) {
    smcensus::RunConfig config;
    config.command = "verify";
    if (argc > 1) config.seed = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) config.max_n = std::atoi(argv[2]);

    int unexpected = 0;
    int passed = 0;
    std::printf("acceptance: seed=%llu max_n=%d truncation=%lld\n", static_cast<unsigned long long>(config.seed),
                config.max_n, static_cast<long long>(config.truncation));
    for (int c = 1; c <= smcensus::kCriterionCount; ++c) {
        const auto start = std::chrono::steady_clock::now();
        const auto record = smcensus::run_criterion(c, config);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const auto known = kKnownFailures.find(c);

        std::printf("%s %-28s %7.2fs", record.pass ? "PASS" : "FAIL", record.id.c_str(), secs);
        if (record.pass) {
            ++passed;
            if (known != kKnownFailures.end()) {
                std::printf("  (unexpected pass: listed as known failure)");
                ++unexpected;
            }
        } else if (known != kKnownFailures.end()) {
            std::printf("  (known: %s)", known->second.c_str());
        } else {
            ++unexpected;
        }
        std::printf("\n");
        if (!record.pass) std::printf("     %s\n", record.to_line().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria pass; %d unexpected result(s)\n", passed, smcensus::kCriterionCount, unexpected);
    return unexpected == 0 ? 0 : 1;
}
