#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiked/entropy.hpp"

namespace {

struct Run {
  std::string out;
  int status = -1;
};

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + SPIKED_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string run_stderr(const std::string& args) {
  std::string cmd = std::string(SPIKED_CLI) + " " + args + " 2>&1 >/dev/null";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  pclose(p);
  return out;
}

using Row = std::vector<std::string>;

std::vector<Row> parse_csv(const std::string& text) {
  std::vector<Row> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    Row row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(std::move(row));
  }
  return rows;
}

double cell(const std::vector<Row>& rows, std::size_t r, const std::string& column) {
  const auto& header = rows.at(0);
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == column) return std::stod(rows.at(r).at(i));
  throw std::out_of_range("no column " + column);
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").status, 0);
  EXPECT_EQ(run("thresholds --help").status, 0);
  EXPECT_NE(run("thresholds --prior spherical --d 3 --bogus").status, 0);
  EXPECT_NE(run("thresholds --prior cubic --d 3").status, 0);
  EXPECT_NE(run("thresholds --prior sparse --d 3").status, 0);  // missing --rho
  EXPECT_NE(run("ratefn --prior rademacher --grid 1").status, 0);
  EXPECT_NE(run("replica --prior sparse --rho 0.2 --d 3 --lambda 2").status, 0);
  EXPECT_NE(run("").status, 0);
}

TEST(Cli, ThresholdsSphericalOrdering) {
  auto r = run("thresholds --prior spherical --d 3..10");
  ASSERT_EQ(r.status, 0);
  auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 9u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(cell(rows, i, "lambda_lower"), cell(rows, i, "lambda_upper"));
    EXPECT_LT(cell(rows, i, "lambda_upper"), cell(rows, i, "mu_d"));
  }
  EXPECT_NEAR(cell(rows, 1, "mu_d"), 2.3433, 5e-4);
}

TEST(Cli, ThresholdsOrderTwoExact) {
  auto rows = parse_csv(run("thresholds --prior rademacher --d 2").out);
  EXPECT_EQ(cell(rows, 1, "lambda_lower"), 1.0);
  EXPECT_EQ(cell(rows, 1, "lambda_upper"), 1.0);
  rows = parse_csv(run("thresholds --prior sparse --rho 0.1 --d 2 --asymptotics").out);
  EXPECT_GT(cell(rows, 1, "lambda_lower"), cell(rows, 1, "asymptotic_lower"));
  EXPECT_LT(cell(rows, 1, "lambda_lower"), cell(rows, 1, "lambda_upper"));
}

TEST(Cli, ThresholdsReplicaColumns) {
  auto rows = parse_csv(run("thresholds --prior rademacher --d 3 --replica").out);
  EXPECT_LE(cell(rows, 1, "lambda_lower"), cell(rows, 1, "replica_lambda2"));
  EXPECT_LE(cell(rows, 1, "replica_lambda2"), cell(rows, 1, "lambda_upper"));
}

TEST(Cli, RateFunctionTables) {
  auto rows = parse_csv(run("ratefn --prior rademacher --grid 5").out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(cell(rows, 1, "f"), 0.0);

  rows = parse_csv(run("ratefn --prior sparse --rho 0.3 --grid 100").out);
  EXPECT_NEAR(cell(rows, 100, "t"), 1.0, 1e-12);
  EXPECT_NEAR(cell(rows, 100, "f"), spiked::binary_entropy(0.3) + 0.3 * std::log(2.0), 1e-8);

  rows = parse_csv(run("ratefn --prior spherical --grid 100 --tmax 0.999").out);
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_GT(cell(rows, i, "f"), cell(rows, i - 1, "f"));

  rows = parse_csv(run("ratefn --prior rademacher --grid 3 --n 20").out);
  EXPECT_NO_THROW(cell(rows, 2, "exact_tail"));
  EXPECT_NE(run("ratefn --prior rademacher --grid 3 --n 500").status, 0);
}

TEST(Cli, ReplicaTables) {
  auto rows = parse_csv(run("replica --prior spherical --d 3 --lambda 3.0").out);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(cell(rows, i, "residual"), 1e-9);

  rows = parse_csv(run("replica --prior rademacher --d 2 --thresholds").out);
  EXPECT_NEAR(cell(rows, 1, "lambda1"), 1.0, 0.01);

  rows = parse_csv(run("replica --prior rademacher --d 50 --thresholds").out);
  EXPECT_NEAR(cell(rows, 1, "lambda2") / 1.665109, 1.0, 0.02);

  rows = parse_csv(run("replica --prior spherical --d 2 --lambda 1.5..2 --points 3").out);
  EXPECT_EQ(rows.size(), 7u);  // zero + high branch at each of 3 lambdas
}

TEST(Cli, SimulateDetectAndRecords) {
  auto path = std::filesystem::temp_directory_path() / "spiked_cli_records.csv";
  auto r = run("simulate detect --prior rademacher --n 10 --d 3 --lambda 4 --trials 20 --seed 7 --records " +
               path.string());
  ASSERT_EQ(r.status, 0);
  auto rows = parse_csv(r.out);
  EXPECT_GE(cell(rows, 1, "accuracy"), 0.9);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto recs = parse_csv(ss.str());
  EXPECT_EQ(recs.size(), 41u);
  std::filesystem::remove(path);
}

TEST(Cli, SimulateOtherSubcommands) {
  EXPECT_EQ(parse_csv(run("simulate recover --n 8 --lambda 3 --trials 4").out).size(), 2u);
  EXPECT_EQ(parse_csv(run("simulate tails --prior rademacher --n 20 --trials 200 --t-grid 0.1,0.3").out).size(), 3u);
  EXPECT_EQ(parse_csv(run("simulate norms --n 5 --d 3 --lambda 1 --trials 3 --spike-start").out).size(), 4u);
  auto rows = parse_csv(run("simulate bbp --n 100 --lambda 2 --trials 2").out);
  EXPECT_NEAR(cell(rows, 1, "predicted_top_eigenvalue"), 2.5, 1e-12);
}

TEST(Cli, CapacityErrorNamesTheCap) {
  auto r = run("simulate detect --prior rademacher --n 30 --trials 1 --lambda 2");
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(run_stderr("simulate detect --prior rademacher --n 30 --trials 1 --lambda 2").find("2^24"),
            std::string::npos);
}

TEST(Cli, JsonDocument) {
  auto r = run("thresholds --prior rademacher --d 2..3 --format json");
  ASSERT_EQ(r.status, 0);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["schema_version"], "1");
  EXPECT_EQ(doc["command"], "thresholds");
  ASSERT_EQ(doc["rows"].size(), 2u);
  EXPECT_EQ(doc["rows"][0]["mu_d"], "NaN");
  EXPECT_EQ(doc["rows"][0]["lambda_lower"], 1.0);
  EXPECT_EQ(doc["columns"].size(), doc["rows"][1].size());
}

TEST(Cli, OutputFileAndPrecision) {
  auto path = std::filesystem::temp_directory_path() / "spiked_cli_out.csv";
  ASSERT_EQ(run("ratefn --prior rademacher --grid 3 --precision 4 --out " + path.string()).status, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "t,f\n0,0\n0.5,0.1308\n1,0.6931\n");
  std::filesystem::remove(path);
}

TEST(Cli, DeterministicAcrossThreads) {
  const std::vector<std::string> commands = {
      "simulate detect --prior rademacher --n 9 --d 3 --lambda 2 --trials 16 --seed 3",
      "simulate recover --prior sparse --rho 0.5 --n 10 --d 3 --lambda 2 --trials 10 --seed 3",
      "simulate norms --n 6 --d 3 --lambda 1.5 --trials 6 --seed 3",
      "simulate tails --prior spherical --n 30 --trials 500 --t-grid 0..0.6 --points 4 --seed 3",
      "simulate bbp --n 80 --lambda 1.5 --trials 5 --seed 3",
  };
  for (const auto& c : commands) {
    auto one = run(c + " --threads 1");
    ASSERT_EQ(one.status, 0) << c;
    EXPECT_EQ(one.out, run(c + " --threads 2").out) << c;
    EXPECT_EQ(one.out, run(c + " --threads 8").out) << c;
    EXPECT_EQ(one.out, run(c + " --threads 1", "SPIKED_TENSOR_THREADS=4").out) << c;
  }
}
