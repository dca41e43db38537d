#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "deephole/cli.hpp"

using json = nlohmann::json;

namespace {

struct CliRun {
    int rc;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int rc = deephole::cli::run(args, out, err);
    return {rc, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, int expect_rc = 0) {
    args.push_back("--deterministic");
    const CliRun r = run(args);
    EXPECT_EQ(r.rc, expect_rc) << r.err;
    return json::parse(r.out);
}

std::size_t line_count(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

}  // namespace

TEST(Cli, HdTerms) {
    const json j = run_json({"hd", "--d", "3", "--p", "7"});
    EXPECT_EQ(j["command"], "hd");
    EXPECT_EQ(j["result"]["terms"], json::parse(R"j({"(0,0,1)":1,"(1,1,0)":5,"(3,0,0)":1})j"));
    EXPECT_EQ(j["timing_ms"], 0.0);
    EXPECT_EQ(j["params"]["threads"], 1);
}

TEST(Cli, DeepholeVerdicts) {
    json j = run_json({"deephole", "--q", "7", "--k", "2", "--f", "0,0,1"});
    EXPECT_EQ(j["result"]["verdict"], "deep_hole");
    EXPECT_EQ(j["result"]["distance"], 4);
    // 1,0,0 is the constant polynomial 1 under the low-first convention
    j = run_json({"deephole", "--q", "7", "--k", "2", "--f", "1,0,0"});
    EXPECT_EQ(j["result"]["verdict"], "codeword");
    // T^3 over F_7 with k = 2 has a witness, so it is not a deep hole
    j = run_json({"deephole", "--q", "7", "--k", "2", "--f", "0,0,0,1"});
    EXPECT_EQ(j["result"]["verdict"], "not_deep_hole");
}

TEST(Cli, SearchAndThresholds) {
    json j = run_json({"search", "--q", "7", "--k", "2", "--d", "1", "--f", "0"});
    EXPECT_EQ(j["result"]["status"], "found");
    j = run_json({"thresholds", "--q", "401", "--k", "19", "--d", "3", "--epsilon", "1/2"});
    EXPECT_EQ(j["result"]["verdict"], "conditions_met");
    j = run_json({"thresholds", "--q", "218", "--k", "15", "--d", "3", "--epsilon", "1/2"}, 1);
    EXPECT_EQ(j["result"]["verdict"], "conditions_not_met");
    j = run_json({"thresholds", "--q", "401", "--k", "19", "--d", "2", "--epsilon", "1/2"}, 2);
    EXPECT_EQ(j["result"]["verdict"], "not_applicable");
}

TEST(Cli, ArtinSchreier) {
    const json j = run_json({"artin-schreier", "--p", "5", "--s", "2", "--k", "7", "--d", "3"});
    EXPECT_EQ(j["result"]["root_count"], 10);
    EXPECT_EQ(j["result"]["distance"], 14);
    EXPECT_EQ(j["result"]["covering_radius"], 17);
}

TEST(Cli, ErrorExitCodes) {
    EXPECT_EQ(run({"field", "--q", "12"}).rc, 2);
    EXPECT_EQ(run({"deephole", "--q", "11", "--k", "8", "--f", "0,0,0,0,0,0,0,0,0,1"}).rc, 3);
    EXPECT_EQ(run({"nonsense"}).rc, 2);
    const CliRun r = run({"field", "--q", "12"});
    EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, CsvRowCounts) {
    CliRun r = run({"field", "--q", "4", "--format", "csv"});
    EXPECT_EQ(r.rc, 0);
    EXPECT_EQ(line_count(r.out), 5u);  // header + 4 elements
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "digits,inverse,rep,trace");
    r = run({"hd", "--d", "4", "--p", "7", "--format", "csv"});
    EXPECT_EQ(line_count(r.out), 6u);  // partitions of 4
    r = run({"hf-eval", "--q", "7", "--k", "2", "--d", "1", "--f", "0", "--x", "1,2,4", "--format", "csv"});
    EXPECT_EQ(line_count(r.out), 4u);
    r = run({"equivalence-sweep", "--q", "7", "--k", "3", "--d", "1", "--format", "csv"});
    EXPECT_EQ(line_count(r.out), 8u);
}

TEST(Cli, DeterministicOutputIsByteStable) {
    const std::vector<std::vector<std::string>> cmds{
        {"field", "--q", "9"},
        {"hd", "--d", "5", "--p", "3"},
        {"hf-eval", "--q", "7", "--k", "2", "--d", "1", "--f", "0", "--x", "1,2,4"},
        {"search", "--q", "11", "--k", "3", "--d", "2", "--f", "1,2"},
        {"deephole", "--q", "7", "--k", "2", "--f", "0,0,1"},
        {"verify-identities", "--q", "7", "--kplus1", "4", "--seed", "9"},
        {"singular-scan", "--q", "5", "--k", "3", "--d", "2", "--f", "0,0"},
        {"infinity-scan", "--q", "5", "--k", "3", "--d", "2", "--f", "0,0"},
        {"artin-schreier", "--p", "5", "--s", "2", "--k", "7", "--d", "3"},
        {"bounds", "--q", "11", "--k", "3", "--d", "2"},
        {"thresholds", "--q", "219", "--k", "15", "--d", "3", "--epsilon", "1/2"},
        {"equivalence-sweep", "--q", "7", "--k", "3", "--d", "1"},
    };
    for (auto c : cmds) {
        c.push_back("--deterministic");
        const CliRun a = run(c), b = run(c);
        EXPECT_EQ(a.out, b.out) << c[0];
        EXPECT_FALSE(a.out.empty()) << c[0];
        auto t = c;
        t.push_back("--threads");
        t.push_back("4");
        EXPECT_EQ(run(t).out, a.out) << c[0];  // --deterministic forces one thread
    }
}

TEST(Cli, ThreadedResultsMatchSingleThreaded) {
    auto strip = [](json j) {
        j.erase("timing_ms");
        j["params"].erase("threads");
        return j;
    };
    for (const auto& c : std::vector<std::vector<std::string>>{
             {"singular-scan", "--q", "7", "--k", "3", "--d", "2", "--f", "3,1"},
             {"search", "--q", "11", "--k", "4", "--d", "2", "--f", "0,0"},
             {"deephole", "--q", "11", "--k", "3", "--f", "0,0,0,0,1"}}) {
        auto one = c, many = c;
        one.insert(one.end(), {"--threads", "1"});
        many.insert(many.end(), {"--threads", "3"});
        const CliRun a = run(one), b = run(many);
        EXPECT_EQ(a.rc, b.rc);
        EXPECT_EQ(strip(json::parse(a.out)), strip(json::parse(b.out))) << c[0];
    }
}
