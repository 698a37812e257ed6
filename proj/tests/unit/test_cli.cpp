#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "copert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = copert::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, SternSigmaOneIsExactlyThree) {
  const Outcome o = run({"stern-sigma", "--tau", "1"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "stern-sigma");
  EXPECT_EQ(j["results"]["sigma_exact"], "3");
  EXPECT_TRUE(j.contains("provenance"));
  EXPECT_TRUE(j["timing"].contains("seconds"));
}

TEST(Cli, TmMomentsCsv) {
  const Outcome o = run({"tm-moments", "--k", "1", "--n-max", "12", "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,n,M");
  for (int n = 0; n <= 12; ++n) {
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(line, "1," + std::to_string(n) + "," + std::to_string(1 << n));
  }
  EXPECT_FALSE(std::getline(in, line));
}

TEST(Cli, ExactValuesAreStrings) {
  const Outcome o = run({"stern-moments", "--tau", "7", "--N-max", "14"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  for (const auto& row : j["results"]["moments"]) EXPECT_TRUE(row["M"].is_string());
}

TEST(Cli, DeterministicResults) {
  const std::vector<std::string> args{"profile-verify", "--system", "stern", "--tau", "5", "--seed", "4"};
  const json a = json::parse(run(args).out);
  const json b = json::parse(run(args).out);
  EXPECT_EQ(a["results"].dump(), b["results"].dump());
  EXPECT_EQ(a["provenance"].dump(), b["provenance"].dump());
  EXPECT_EQ(a["provenance"]["seed"], 4);
}

TEST(Cli, JsonRoundTrip) {
  const Outcome o = run({"tm-constants"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(json::parse(j.dump()), j);
  EXPECT_TRUE(j["results"]["delta_1"].contains("tail_bound"));
  EXPECT_TRUE(j["results"]["xi_7_8"].contains("tail_bound"));
}

TEST(Cli, IdentityAndBracket) {
  const Outcome id = run({"stern-identity", "--tau", "3", "--N-max", "12"});
  ASSERT_EQ(id.code, 0) << id.err;
  EXPECT_TRUE(json::parse(id.out)["results"]["checks"]["identity_exact"].get<bool>());
  const Outcome br = run({"bracket", "--system", "stern", "--tau", "8", "--r-max", "16"});
  ASSERT_EQ(br.code, 0) << br.err;
  const json j = json::parse(br.out);
  EXPECT_LE(j["results"]["bracket"]["rho_lo"].get<double>(), j["results"]["bracket"]["rho_hi"].get<double>());
}

TEST(Cli, TmRho) {
  const Outcome o = run({"tm-rho", "--k", "2", "--n-max", "13"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(json::parse(o.out)["results"]["checks"]["below_prior_upper"].get<bool>());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"no-such-command"}).code, 1);
  const Outcome bad_flag = run({"stern-sigma", "--tau", "2", "--bogus"});
  EXPECT_EQ(bad_flag.code, 1);
  EXPECT_NE(bad_flag.err.find("stern-sigma"), std::string::npos);
  EXPECT_EQ(run({"tm-moments", "--format", "xml"}).code, 1);
}

TEST(Cli, NumericErrorsExitOne) {
  EXPECT_EQ(run({"tm-moments", "--k", "4", "--n-max", "20", "--cap", "1000"}).code, 1);
  EXPECT_EQ(run({"profile-verify", "--system", "tm", "--tau", "1"}).code, 1);
}

TEST(Cli, HelpExitsZero) {
  const Outcome o = run({"--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("tm-moments"), std::string::npos);
}

TEST(Cli, OutFile) {
  const std::string path = ::testing::TempDir() + "copert_cli_out.json";
  const Outcome o = run({"stern-sigma", "--tau", "2", "--out", path});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  EXPECT_NEAR(j["results"]["sigma"].get<double>(), 4.5615528128, 1e-9);
  std::remove(path.c_str());
}
