// Copyright 2026 The hhlsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hhlsim/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <sys/wait.h>

namespace hhlsim::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation call(std::vector<std::string> args) {
    args.insert(args.begin(), "hhlsim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

int run_binary(const std::string& args) {
    const int status = std::system((std::string(HHLSIM_BINARY) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliFiles : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("hhlsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kInstanceB3 = R"({"matrix": [[1.5, 0.5], [0.5, 1.5]], "vector": [1, 0], "register_bits": 2, "c_const": 1.0})";

TEST_F(CliFiles, SolveDemoInstance) {
    const Invocation r = call({"solve", write("p.json", kInstanceB3)});
    ASSERT_EQ(r.code, kOk) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("schema_version"), "1");
    EXPECT_GE(j.at("fidelity").get<double>(), 1 - 1e-9);
    EXPECT_NEAR(j.at("success_probability").get<double>(), 0.625, 1e-9);
    EXPECT_EQ(j.at("config").at("register_bits"), 2);
    EXPECT_TRUE(j.at("gate_count").contains("entangling"));
}

TEST_F(CliFiles, SolveWithSeparateMatrixAndVector) {
    const std::string m = write("m.json", "[[1.5, 0.5], [0.5, 1.5]]");
    const std::string v = write("v.json", "[0.7071067811865476, 0.7071067811865476]");
    const Invocation r = call({"solve", "--matrix", m, "--vector", v, "--c-const", "2"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_NEAR(json::parse(r.out).at("success_probability").get<double>(), 1.0, 1e-9);
}

TEST_F(CliFiles, SolveShotsAndCsv) {
    const std::string p = write("p.json", kInstanceB3);
    const Invocation r = call({"solve", p, "--shots", "100000", "--seed", "3"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const json shots = json::parse(r.out).at("shots");
    EXPECT_LE(std::abs(shots.at("success_frequency").get<double>() - 0.625), 3 * std::sqrt(0.625 * 0.375 / 1e5));
    const Invocation csv = call({"solve", p, "--format", "csv"});
    EXPECT_EQ(csv.out.substr(0, 12), "index,re,im\n");
}

TEST_F(CliFiles, SolveErrorsMapToExitCodes) {
    const Invocation sing = call({"solve", write("s.json", R"({"matrix": [[1, 0], [0, 0]], "vector": [1, 0]})")});
    EXPECT_EQ(sing.code, kInvalidInput);
    EXPECT_NE(sing.err.find("singular"), std::string::npos);
    const Invocation bad = call({"solve", write("bad.json", "{\"matrix\": [[1, 0], ")});
    EXPECT_EQ(bad.code, kInvalidInput);
    EXPECT_NE(bad.err.find("parse"), std::string::npos);
    EXPECT_EQ(call({"solve", write("c.json", kInstanceB3), "--c-const", "2"}).code, kInvalidInput);
    EXPECT_EQ(call({"solve", path("missing.json")}).code, kInvalidInput);
    EXPECT_EQ(call({"solve", write("n.json", R"({"matrix": [[1, 0], [0, 2]], "vector": [1, 1]})")}).code,
              kInvalidInput);
    const Invocation zero = call({"solve", write("z.json", R"({"matrix": [[4, 0], [0, 4]], "vector": [1, 0], "c_const": 1})")});
    EXPECT_EQ(zero.code, kZeroProbability);
    EXPECT_FALSE(zero.err.empty());
}

TEST_F(CliFiles, OutFileMatchesStdout) {
    const std::string p = write("p.json", kInstanceB3);
    const Invocation a = call({"solve", p});
    ASSERT_EQ(call({"solve", p, "--out", path("out.json")}).code, kOk);
    EXPECT_EQ(slurp(path("out.json")), a.out);
    EXPECT_EQ(call({"solve", p, "--out", path("no/such/dir/out.json")}).code, kInvalidInput);
}

TEST(ReportCommand, GenericAllInputs) {
    const Invocation r = call({"paper", "--mode", "generic"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const json j = json::parse(r.out);
    ASSERT_EQ(j.at("inputs").size(), 3u);
    for (const json& in : j.at("inputs")) EXPECT_NEAR(in.at("fidelity").get<double>(), 1.0, 1e-9);
    EXPECT_EQ(j.at("config").at("mode"), "generic");
}

TEST(ReportCommand, CompiledB3) {
    const Invocation r = call({"paper", "--input", "b3", "--mode", "compiled"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const json in = json::parse(r.out).at("inputs").at(0);
    EXPECT_NEAR(in.at("fidelity").get<double>(), 0.9990, 1e-4);
    EXPECT_NEAR(in.at("success_probability").get<double>(), 0.32322, 1e-5);
}

TEST(ReportCommand, SemiclassicalShotsOnB1) {
    const Invocation r = call({"paper", "--input", "b1", "--mode", "compiled", "--feedforward", "semiclassical",
                               "--shots", "100000", "--seed", "0"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const json shots = json::parse(r.out).at("inputs").at(0).at("shots");
    const double x = shots.at("mean").at("X").get<double>();
    const double sigma = shots.at("stderr").at("X").get<double>();
    EXPECT_LE(std::abs(x - 1.0), 3 * sigma + 1e-12);
}

TEST(ReportCommand, CsvAndDeterminism) {
    const std::vector<std::string> args{"paper", "--shots", "5000", "--seed", "11", "--format", "csv"};
    const Invocation a = call(args), b = call(args);
    ASSERT_EQ(a.code, kOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "input,observable,ideal,simulated,stderr");
    EXPECT_NE(call({"paper", "--shots", "5000", "--seed", "12", "--format", "csv"}).out, a.out);
}

TEST(ReportCommand, BadFlags) {
    EXPECT_EQ(call({"paper", "--input", "b7"}).code, kInvalidInput);
    EXPECT_EQ(call({"paper", "--mode", "photonic"}).code, kInvalidInput);
    EXPECT_EQ(call({"paper", "--shots", "-3"}).code, kInvalidInput);
    EXPECT_EQ(call({"frobnicate"}).code, kInvalidInput);
    EXPECT_EQ(call({}).code, kInvalidInput);
}

std::map<std::string, std::vector<double>> sweep_rows(const std::string& csv) {
    std::map<std::string, std::vector<double>> rows;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto c1 = line.find(','), c2 = line.rfind(',');
        rows[line.substr(c1 + 1, c2 - c1 - 1)].push_back(std::stod(line.substr(c2 + 1)));
    }
    return rows;
}

TEST(NoiseSweep, DefaultGridIsMonotone) {
    const Invocation r = call({"noise-sweep"});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "p,input,fidelity");
    const auto rows = sweep_rows(r.out);
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& [input, f] : rows) {
        ASSERT_EQ(f.size(), 11u);
        for (std::size_t i = 1; i < f.size(); ++i) EXPECT_LE(f[i], f[i - 1] + 1e-12) << input;
    }
    EXPECT_NEAR(rows.at("b1")[0], 1.0, 1e-9);
    EXPECT_NEAR(rows.at("b3")[0], json::parse(call({"paper", "--input", "b3", "--mode", "compiled"}).out)
                                      .at("inputs")[0]
                                      .at("fidelity")
                                      .get<double>(),
                1e-9);
}

TEST(NoiseSweep, FullNoiseGivesHalf) {
    for (const char* mode : {"compiled", "generic"}) {
        const Invocation r = call({"noise-sweep", "--p", "1", "--mode", mode});
        ASSERT_EQ(r.code, kOk) << r.err;
        for (const auto& [input, f] : sweep_rows(r.out)) EXPECT_NEAR(f.at(0), 0.5, 1e-9) << input;
    }
}

TEST(NoiseSweep, RangeAndJson) {
    EXPECT_EQ(call({"noise-sweep", "--p", "1.5"}).code, kInvalidInput);
    EXPECT_EQ(call({"noise-sweep", "--p", "-0.1"}).code, kInvalidInput);
    const Invocation r = call({"noise-sweep", "--p", "0,0.2", "--noise-target", "entangling", "--format", "json"});
    ASSERT_EQ(r.code, kOk) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("rows").size(), 6u);
    EXPECT_EQ(j.at("config").at("noise_target"), "entangling");
}

TEST(Selftest, PassesOnFreshBuild) {
    const Invocation r = call({"selftest"});
    EXPECT_EQ(r.code, kOk) << r.out;
    EXPECT_GE(run_selftest().size(), 10u);
    for (const auto& c : run_selftest()) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(Selftest, CorruptedAngleFails) {
    const Invocation r = call({"selftest", "--corrupt-theta", "0.5"});
    EXPECT_EQ(r.code, kCheckFailed);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliFiles, BinaryExitCodes) {
    const std::string p = write("p.json", kInstanceB3);
    EXPECT_EQ(run_binary("solve " + p), 0);
    EXPECT_EQ(run_binary("selftest --corrupt-theta 0.5"), 1);
    EXPECT_EQ(run_binary("solve " + write("bad.json", "{")), 2);
    EXPECT_EQ(run_binary("solve " + write("z.json", R"({"matrix": [[4, 0], [0, 4]], "vector": [1, 0], "c_const": 1})")), 3);
}

TEST_F(CliFiles, SeedEnvironmentFallback) {
    const std::string base = std::string(HHLSIM_BINARY) + " paper --input b3 --shots 3000 --format csv";
    ASSERT_EQ(std::system(("HHL_SIM_SEED=5 " + base + " > " + path("env.csv")).c_str()), 0);
    ASSERT_EQ(std::system((base + " --seed 5 > " + path("flag.csv")).c_str()), 0);
    ASSERT_EQ(std::system((base + " > " + path("zero.csv")).c_str()), 0);
    EXPECT_FALSE(slurp(path("env.csv")).empty());
    EXPECT_EQ(slurp(path("env.csv")), slurp(path("flag.csv")));
    EXPECT_NE(slurp(path("env.csv")), slurp(path("zero.csv")));
}

}  // namespace
}  // namespace hhlsim::cli
