#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "smcensus/cli.hpp"

using namespace smcensus;

namespace {

int run_args(std::vector<std::string> args) {
    args.insert(args.begin(), "smcensus");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    return run(static_cast<int>(args.size()), argv.data());
}

std::string report(const RunConfig& config, int* code = nullptr) {
    std::ostringstream out;
    const int rc = execute(config, out);
    if (code) *code = rc;
    return out.str();
}

} // namespace

TEST(Cli, EnumerateFixture) {
    RunConfig config;
    config.command = "enumerate";
    config.input_path = std::string(SMCENSUS_FIXTURES) + "/instance_i2.json";
    int code = -1;
    const auto text = report(config, &code);
    EXPECT_EQ(code, 0);
    EXPECT_NE(text.find("\"brute\":2"), std::string::npos) << text;
    EXPECT_NE(text.find("\"rotations\":2"), std::string::npos) << text;
    EXPECT_NE(text.find("\"matchings\":[[0,1],[1,0]]"), std::string::npos) << text;
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run_args({}), 2);
    EXPECT_EQ(run_args({"frobnicate"}), 2);
    EXPECT_EQ(run_args({"enumerate", "--max-n"}), 2);
    EXPECT_EQ(run_args({"enumerate", "--method", "guess"}), 2);
    EXPECT_EQ(run_args({"enumerate", "--max-n", "0"}), 2);
    EXPECT_EQ(run_args({"enumerate", "--in", "/nonexistent/instance.json"}), 2);
    EXPECT_EQ(run_args({"verify", "--suite", "15"}), 2);
    EXPECT_EQ(run_args({"verify", "--suite", "x"}), 2);
    EXPECT_EQ(run_args({"bounds", "--series", "zz"}), 2);
}

TEST(Cli, NegativeControlFailsBijection) {
    RunConfig config;
    config.command = "verify";
    config.suite = "1";
    config.max_n = 5;
    int code = -1;
    const auto clean = report(config, &code);
    EXPECT_EQ(code, 0) << clean;
    config.inject_fault = true;
    const auto faulty = report(config, &code);
    EXPECT_EQ(code, 1);
    EXPECT_NE(faulty.find("\"check\":\"c01_bijection\""), std::string::npos);
    EXPECT_NE(faulty.find("\"pass\":false"), std::string::npos);
}

TEST(Cli, ReportsAreDeterministic) {
    RunConfig config;
    config.command = "verify";
    config.suite = "2,3,13";
    config.max_n = 5;
    config.seed = 42;
    const auto first = report(config);
    EXPECT_EQ(first, report(config));

    setenv("SMCENSUS_THREADS", "3", 1);
    const auto threaded = report(config);
    unsetenv("SMCENSUS_THREADS");
    EXPECT_EQ(first, threaded);

    RunConfig other = config;
    other.seed = 43;
    EXPECT_NE(first, report(other));
}

TEST(Cli, ReportLinesAreSortedJson) {
    RunConfig config;
    config.command = "rotations";
    config.max_n = 6;
    config.seed = 5;
    std::istringstream lines(report(config));
    std::string line, previous;
    int count = 0;
    while (std::getline(lines, line)) {
        const auto doc = nlohmann::json::parse(line);
        ASSERT_TRUE(doc.contains("check"));
        ASSERT_TRUE(doc.contains("pass"));
        const auto id = doc["check"].get<std::string>();
        EXPECT_LE(previous, id);
        previous = id;
        ++count;
    }
    EXPECT_GT(count, 1);
}

TEST(Cli, CriterionIds) {
    const auto& ids = criterion_ids();
    ASSERT_EQ(ids.size(), static_cast<std::size_t>(kCriterionCount));
    EXPECT_EQ(ids.front(), "c01_bijection");
    EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
}

TEST(Cli, DegenerateMaxN) {
    RunConfig config;
    config.command = "verify";
    config.suite = "1,2,3";
    config.max_n = 1;
    int code = -1;
    const auto text = report(config, &code);
    EXPECT_EQ(code, 0) << text;
}

TEST(Cli, SeriesAndSimulate) {
    RunConfig config;
    config.command = "series";
    config.series = "whitworth";
    int code = -1;
    report(config, &code);
    EXPECT_EQ(code, 0);

    config.series = "section4";
    config.truncation = 30;
    report(config, &code);
    EXPECT_EQ(code, 0);

    config.command = "simulate";
    config.series = "nxprime";
    config.samples = 20000;
    report(config, &code);
    EXPECT_EQ(code, 0);
}
