#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "modflow/cli.hpp"

namespace
{

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(const std::vector<std::string> &args)
{
    std::ostringstream out, err;
    const int code = modflow::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string &s)
{
    std::vector<std::string> r;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) {
        r.push_back(l);
    }
    return r;
}

} // namespace

TEST(Cli, EvalThetaCsv)
{
    const Outcome r = run({"eval", "theta", "--tau", "0.1,1.2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_GE(ls.size(), 5u);
    EXPECT_EQ(ls[0], "quantity,re,im");
    EXPECT_EQ(ls[1].rfind("theta2,", 0), 0u);
}

TEST(Cli, EvalEllipticJson)
{
    const Outcome r = run({"--format", "json", "eval", "elliptic", "--k", "0.3,0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    for (const char *key : {"K", "Kprime", "E", "Eprime", "legendre_level"}) {
        ASSERT_TRUE(j.contains(key)) << key;
        EXPECT_EQ(j[key].size(), 2u);
    }
    EXPECT_NEAR(j["legendre_level"][0].get<double>(), 1.5707963267948966, 1e-12);
}

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"eval", "theta"}).code, 2);
    EXPECT_EQ(run({"eval", "theta", "--tau", "abc"}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "eval", "theta", "--tau", "0,1"}).code, 2);
    EXPECT_EQ(run({"--rtol", "1e-3", "eval", "theta", "--tau", "0,1"}).code, 2);
    EXPECT_EQ(run({"flow", "--system", "canonical19", "--from-theta", "0,1", "--t1", "0,1.2", "--samples", "10"}).code,
              2);
}

TEST(Cli, DomainErrorsExitThree)
{
    EXPECT_EQ(run({"eval", "theta", "--tau", "0,-1"}).code, 3);
    EXPECT_EQ(run({"eval", "theta", "--tau", "0,0.01"}).code, 3);
}

TEST(Cli, UnwritableOutExitsSix)
{
    const Outcome r = run({"--out", "/nonexistent-dir/x.csv", "eval", "theta", "--tau", "0,1"});
    EXPECT_EQ(r.code, 6);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, OutWritesFile)
{
    const std::string path = ::testing::TempDir() + "modflow_cli_out.csv";
    const Outcome r = run({"--out", path, "eval", "theta", "--tau", "0,1"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(path);
    std::string first;
    std::getline(f, first);
    EXPECT_EQ(first, "quantity,re,im");
}

TEST(Cli, FlowCsvHasHeaderAndGrid)
{
    const Outcome r = run({"flow", "--system", "canonical19", "--from-theta", "0.1,1", "--t1", "0.1,1.3", "--samples",
                       "64", "--verify-closed-form"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 66u);
    EXPECT_EQ(ls[0].rfind("index,t_re,t_im,x_re,x_im", 0), 0u);
    EXPECT_NE(ls[0].find("closed_form_dev"), std::string::npos);
}

TEST(Cli, FlowJsonStructure)
{
    const Outcome r = run({"--format", "json", "flow", "--system", "jacobi9", "--from-theta", "0,1", "--t1", "0,1.2",
                       "--samples", "64"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["system"], "jacobi9");
    EXPECT_EQ(j["components"].size(), 4u);
    ASSERT_EQ(j["samples"].size(), 65u);
    EXPECT_EQ(j["samples"][0]["state"].size(), 4u);
    EXPECT_EQ(j["samples"][64]["index"], 64);
}

TEST(Cli, CheckSuitePassesAtDefaultSeed)
{
    for (const char *suite : {"identities", "brackets", "nambu", "chazy"}) {
        const Outcome r = run({"check", suite});
        EXPECT_EQ(r.code, 0) << suite << "\n" << r.out << r.err;
    }
    const Outcome r = run({"--format", "json", "check", "brackets"});
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_TRUE(j.is_array());
    for (const auto &row : j) {
        EXPECT_TRUE(row["pass"].get<bool>()) << row["check"];
    }
}

TEST(Cli, ByteIdenticalOnRepeat)
{
    const std::vector<std::vector<std::string>> cases{
        {"flow", "--system", "canonical19", "--from-theta", "0.1,1", "--t1", "0.1,1.3"},
        {"--seed", "7", "check", "obstruction"},
        {"--format", "json", "check", "lagrangian"},
    };
    for (const auto &c : cases) {
        const Outcome a = run(c), b = run(c);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(Cli, FuzzCorpusNeverCrashes)
{
    std::ifstream in(MODFLOW_FUZZ_CORPUS);
    ASSERT_TRUE(in) << MODFLOW_FUZZ_CORPUS;
    const std::set<int> allowed{0, 2, 3, 4, 5, 6};
    int n = 0;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) {
            continue;
        }
        const auto args = nlohmann::json::parse(line).get<std::vector<std::string>>();
        const Outcome r = run(args);
        EXPECT_TRUE(allowed.count(r.code)) << r.code << " for " << line << "\n" << r.err;
        ++n;
    }
    EXPECT_GE(n, 1000);
}
