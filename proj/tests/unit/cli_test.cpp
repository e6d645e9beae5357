// Copyright 2026 The tomocs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cli.hpp"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tomocs/sensing_io.hpp"
#include "tomocs/simulate.hpp"

namespace tomocs::cli {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tomocs");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream is(p);
  return nlohmann::json::parse(is);
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = tomocs::testing::scratch_dir("cli");
    data_ = (dir_ / "cz.csv").string();
    ASSERT_EQ(invoke({"simulate", "--gate", "cz", "--sigma", "0.01", "--seed", "7", "--out", data_}).code, kExitOk);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::filesystem::path dir_;
  std::string data_;
};

TEST_F(Cli, SimulateWritesDatasetAndManifest) {
  const ProbabilityDataset d = read_dataset_csv(data_);
  EXPECT_EQ(d.gate, "cz");
  EXPECT_EQ(d.probabilities, noisy_gate_dataset("cz", 0.01, 7).probabilities);
  const RunManifest m = RunManifest::from_json(read_json(manifest_path(data_)));
  EXPECT_EQ(m.command, "simulate");
  EXPECT_EQ(m.seeds.at("noise"), 7);
  EXPECT_EQ(m.outputs.at(data_), sha256_file_hex(data_));
  EXPECT_EQ(m.tool_version, tool_version());
}

TEST_F(Cli, EstimateReportAndReplay) {
  const std::vector<std::string> args = {"estimate", "--data", data_, "--method", "cs", "--mconf", "60",
                                         "--seed", "2", "--epsilon", "opt*1.1", "--out", path("est"),
                                         "--no-timing"};
  const CliRun r = invoke(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const nlohmann::json result = read_json(path("est.result.json"));
  EXPECT_EQ(result.at("status"), "Converged");
  EXPECT_EQ(result.at("m_conf"), 60);
  EXPECT_EQ(result.at("diagnostics").at("wall_time_s"), 0.0);
  EXPECT_GT(result.at("F_vs_full").get<double>(), 0.9);
  EXPECT_NEAR(result.at("epsilon").get<double>(), 1.1 * result.at("epsilon_opt").get<double>(), 1e-15);
  EXPECT_EQ(read_json(path("est.chi.json")).at("gate"), "cz");

  // Re-running with --no-timing reproduces every output byte for byte.
  const std::string chi_hash = sha256_file_hex(path("est.chi.json"));
  const std::string result_hash = sha256_file_hex(path("est.result.json"));
  const CliRun again = invoke({"replay", manifest_path(path("est.result.json")).string()});
  EXPECT_EQ(again.code, kExitOk) << again.err;
  EXPECT_NE(again.out.find("identical"), std::string::npos);
  EXPECT_EQ(sha256_file_hex(path("est.chi.json")), chi_hash);
  EXPECT_EQ(sha256_file_hex(path("est.result.json")), result_hash);

  const CliRun rep = invoke({"report", "--chi", path("est.chi.json"), "--out", path("rep")});
  ASSERT_EQ(rep.code, kExitOk) << rep.err;
  const nlohmann::json report = read_json(path("rep.report.json"));
  EXPECT_EQ(report.at("any_nonphysical"), false);
  EXPECT_TRUE(std::filesystem::exists(path("rep.bars.csv")));
  EXPECT_NEAR(report.at("reports").at(0).at("fidelity").at("process_fidelity").get<double>(),
              result.at("fidelity").at("process_fidelity").get<double>(), 1e-12);
}

TEST_F(Cli, ReportFlagsNonphysicalChi) {
  ASSERT_EQ(invoke({"estimate", "--data", data_, "--method", "ls", "--out", path("ls")}).code, kExitOk);
  nlohmann::json chi = read_json(path("ls.chi.json"));
  chi["chi"][5 * 16 + 5][0] = -0.05;  // flattened [re, im] pairs; entry (5, 5)
  std::ofstream(path("bad.json")) << chi.dump();
  const CliRun r = invoke({"report", "--chi", path("bad.json"), "--out", path("bad")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("not CPTP"), std::string::npos);
  EXPECT_EQ(read_json(path("bad.report.json")).at("any_nonphysical"), true);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"estimate", "--data", data_, "--epsilon", "opt*0.5", "--out", path("inf")}).code,
            kExitInfeasible);
  EXPECT_EQ(invoke({"estimate", "--data", path("missing.csv"), "--out", path("x")}).code, kExitIo);
  EXPECT_EQ(invoke({"estimate", "--data", data_}).code, kExitValidation);
  EXPECT_EQ(invoke({"estimate", "--data", data_, "--method", "ml", "--out", path("x")}).code, kExitValidation);
  EXPECT_EQ(invoke({"estimate", "--data", data_, "--mconf", "500", "--out", path("x")}).code, kExitValidation);
  EXPECT_EQ(invoke({"simulate", "--gate", "cnot", "--out", path("x.csv")}).code, kExitValidation);
  EXPECT_EQ(invoke({"simulate", "--gate", "cz", "--sigma", "0.5", "--out", path("x.csv")}).code, kExitValidation);
  EXPECT_EQ(invoke({}).code, kExitValidation);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
  std::ofstream(path("cfg.json")) << R"({"max_iterations": 2})";
  EXPECT_EQ(invoke({"estimate", "--data", data_, "--config", path("cfg.json"), "--epsilon", "opt*1.5",
                    "--out", path("cap")}).code,
            kExitMaxIterations);
}

TEST_F(Cli, SweepWritesCsvAndIsThreadIndependent) {
  const auto sweep = [&](const std::string& out, const std::string& threads) {
    return invoke({"sweep", "--data", data_, "--mconf", "100,144", "--repeats", "2", "--epsilon", "opt",
                   "--seed", "1", "--threads", threads, "--out", out, "--no-timing"});
  };
  ASSERT_EQ(sweep(path("s1.csv"), "1").code, kExitOk);
  ASSERT_EQ(sweep(path("s2.csv"), "2").code, kExitOk);
  EXPECT_EQ(sha256_file_hex(path("s1.csv")), sha256_file_hex(path("s2.csv")));
  std::ifstream is(path("s1.csv"));
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "m_conf,repeat,seed,epsilon,F_vs_full,F_vs_ideal,eps_num,iterations,status,wall_time_s");
}

TEST_F(Cli, SensingCacheIsRecorded) {
  const std::string cache = path("cache");
  const CliRun r = invoke({"estimate", "--data", data_, "--method", "ls", "--mconf", "100", "--seed", "1",
                        "--phi-cache", cache, "--out", path("cached")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const RunManifest m = RunManifest::from_json(read_json(manifest_path(path("cached.result.json"))));
  const std::string file = m.sensing_cache.at("file");
  EXPECT_TRUE(std::filesystem::exists(file));
  EXPECT_EQ(m.sensing_cache.at("sha256"), sha256_file_hex(file));
}

TEST_F(Cli, BasisExport) {
  ASSERT_EQ(invoke({"basis", "--basis", "svd", "--gate", "cz", "--out", path("b.json")}).code, kExitOk);
  EXPECT_EQ(read_json(path("b.json")).at("label"), "svd");
  EXPECT_EQ(invoke({"basis", "--basis", "pauli", "--qubits", "2", "--out", path("p.json")}).code, kExitOk);
  EXPECT_EQ(invoke({"basis", "--basis", "svd", "--qubits", "2", "--out", path("q.json")}).code, kExitValidation);
}

}  // namespace
}  // namespace tomocs::cli
