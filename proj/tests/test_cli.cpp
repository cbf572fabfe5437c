#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ldtt/cli.hpp"

namespace ldtt::cli {
namespace {

struct Outcome {
    int code = 0;
    std::string out, err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "ldtt");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string src(const std::string& rel) { return std::string(LDTT_SOURCE_DIR) + "/" + rel; }

// Writes `text` to a fresh file under the test temp dir.
std::string temp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("ldtt_cli_" + name);
    std::ofstream(path) << text;
    return path.string();
}

class ConfigEnv : public ::testing::Test {
protected:
    void SetUp() override { unsetenv("LDTT_CONFIG"); }
    void TearDown() override { unsetenv("LDTT_CONFIG"); }
};

TEST_F(ConfigEnv, ExitCodes) {
    EXPECT_EQ(run({"check", src("corpus/prelude.ldtt")}).code, 0);
    EXPECT_EQ(run({"corpus"}).code, 1);
    EXPECT_EQ(run({"--eta-sigma", "corpus"}).code, 0);
    EXPECT_EQ(run({"--prime", "4", "corpus"}).code, 2);
    EXPECT_EQ(run({"check", src("corpus/no_such_file.ldtt")}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    const std::string bad = temp_file("bad.ldtt", "check (A : U) fun (x : A) x : A;");
    EXPECT_EQ(run({"check", bad}).code, 1);
    const std::string wrong = temp_file("wrong.ldtt", "check (A : L) ( ; u : A) u ** u : A * A;");
    EXPECT_EQ(run({"check", wrong}).code, 1);
}

TEST_F(ConfigEnv, TextReportNamesLocationAndReason) {
    const std::string wrong = temp_file("wrong2.ldtt", "def ok (A : U) (x : A) : A := x;\ncheck (A : L) ( ; u : A) u ** u : A * A;");
    const Outcome r = run({"check", wrong});
    EXPECT_NE(r.out.find("PASS "), std::string::npos);
    EXPECT_NE(r.out.find("FAIL "), std::string::npos);
    EXPECT_NE(r.out.find(":2:1"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("LinearViolation"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("check: 1/2 passed"), std::string::npos) << r.out;
}

TEST_F(ConfigEnv, JsonReportsValidateAgainstTheSchema) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"--json", "corpus"},
             {"--json", "check", src("corpus/fmap.ldtt"), "--prelude"},
             {"--json", "model-test", "fam", "--instances", "2"},
             {"--json", "interp", src("corpus/m_sqcap.ldtt")}}) {
        const Outcome r = run(args);
        const auto j = nlohmann::json::parse(r.out);
        EXPECT_EQ(schema_violation(j), "") << args[1];
        EXPECT_EQ(j["schema"], kSchemaName);
        EXPECT_EQ(j["version"], kSchemaVersion);
        std::size_t passed = 0;
        for (const auto& e : j["entries"]) passed += e["status"] == "pass";
        EXPECT_EQ((j["summary"]["passed"].get<std::size_t>()), passed);
        EXPECT_EQ((j["summary"]["total"].get<std::size_t>()), j["entries"].size());
        EXPECT_EQ(r.code, (j["summary"]["ok"].get<bool>()) ? 0 : 1);
    }
}

TEST_F(ConfigEnv, SchemaRejectsInconsistentReports) {
    auto j = nlohmann::json::parse(run({"--json", "--eta-sigma", "corpus"}).out);
    ASSERT_EQ(schema_violation(j), "");
    auto broken = j;
    broken["summary"]["passed"] = 0;
    EXPECT_NE(schema_violation(broken), "");
    broken = j;
    broken["entries"][0]["status"] = "maybe";
    EXPECT_NE(schema_violation(broken), "");
    broken = j;
    broken["version"] = kSchemaVersion + 1;
    EXPECT_NE(schema_violation(broken), "");
}

TEST_F(ConfigEnv, ConfigFileThenFlags) {
    const std::string cfg = temp_file("cfg.json", R"({"prime": 3, "flags": {"eta_sigma": true}})");
    setenv("LDTT_CONFIG", cfg.c_str(), 1);
    auto j = nlohmann::json::parse(run({"--json", "corpus"}).out);
    EXPECT_EQ(j["config"]["prime"], 3);
    EXPECT_TRUE(j["config"]["flags"]["eta_sigma"].get<bool>());
    EXPECT_TRUE(j["summary"]["ok"].get<bool>());
    j = nlohmann::json::parse(run({"--json", "--prime", "5", "--nat-l", "corpus"}).out);
    EXPECT_EQ(j["config"]["prime"], 5);
    EXPECT_TRUE(j["config"]["flags"]["nat_l"].get<bool>());
    EXPECT_TRUE(j["config"]["flags"]["eta_sigma"].get<bool>());

    setenv("LDTT_CONFIG", temp_file("cfg_bad.json", R"({"primes": 3})").c_str(), 1);
    EXPECT_EQ(run({"corpus"}).code, 2);
    setenv("LDTT_CONFIG", temp_file("cfg_bad2.json", R"({"prime": 6})").c_str(), 1);
    EXPECT_EQ(run({"corpus"}).code, 2);
}

TEST_F(ConfigEnv, JobsDoNotChangeTheReport) {
    std::vector<std::string> files;
    for (const char* f : {"fmap", "counit", "m_sqcap", "m_with", "l_subset", "lm_tensor"}) files.push_back(src(std::string("corpus/") + f + ".ldtt"));
    std::vector<std::string> one{"--json", "--prelude", "-j", "1", "check"}, four{"--json", "--prelude", "-j", "4", "check"};
    one.insert(one.end(), files.begin(), files.end());
    four.insert(four.end(), files.begin(), files.end());
    const Outcome a = run(one), b = run(four);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
}

TEST_F(ConfigEnv, NormalizePrintsTheNormalForm) {
    const std::string f = temp_file("norm.ldtt", "def two (A : U) (a : A) : A := (fun (x : A). x) ((fun (y : A). y) a);");
    const Outcome r = run({"normalize", f, "--def", "two"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("fun"), std::string::npos) << r.out;
    EXPECT_EQ(r.out.find("(fun (y"), std::string::npos) << r.out;
    EXPECT_EQ(run({"normalize", f, "--def", "three"}).code, 2);
}

TEST_F(ConfigEnv, ModelSuitesPass) {
    for (const char* suite : {"fam", "gpd", "univalence"}) {
        const Outcome r = run({"model-test", suite, "--instances", "3", "--seed", "9"});
        EXPECT_EQ(r.code, 0) << suite << "\n" << r.out;
    }
    EXPECT_EQ(run({"model-test", "nope"}).code, 2);
}

}  // namespace
}  // namespace ldtt::cli
