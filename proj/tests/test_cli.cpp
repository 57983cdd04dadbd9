#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "report.hpp"

using csma::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> v;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) v.push_back(cell);
  if (!line.empty() && line.back() == ',') v.emplace_back();
  return v;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze prints the three models") {
  const auto r = cli({"analyze", "--topology", "fig1"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out.find("L4") != std::string::npos);
  CHECK(r.out.find("0.7807") != std::string::npos);
  CHECK(r.out.find("0.1710") != std::string::npos);
}

TEST_CASE("input errors exit 1") {
  auto r = cli({"analyze", "--graph", CSMA_TEST_DATA_DIR "/nope.graph"});
  CHECK(r.code == 1);
  CHECK(r.err.find("cannot open") != std::string::npos);
  CHECK(cli({"analyze", "--graph", CSMA_TEST_DATA_DIR "/bad_selfloop.graph"}).code == 1);
  CHECK(cli({"analyze", "--topology", "pentagon"}).code == 1);
  CHECK(cli({"analyze", "--topology", "fig1", "--cw", "abc"}).code == 1);
  CHECK(cli({"analyze", "--topology", "fig1", "--rho", "2", "--ttx", "50"}).code == 1);
  CHECK(cli({"analyze", "--topology", "fig1", "--graph", CSMA_TEST_DATA_DIR "/fig1.graph"}).code == 1);
  CHECK(cli({"analyze"}).code == 1);
  CHECK(cli({"analyze", "--topology", "fig1", "--format", "xml"}).code == 1);
  CHECK(cli({}).code == 1);
  CHECK(cli({"simulate", "--topology", "fig1", "--slots", "1000", "--warmup", "1000"}).code == 1);
}

TEST_CASE("state-space limit exits 2") {
  const auto r = cli({"analyze", "--topology", "fig1", "--max-links", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("large link caps warn") {
  const auto r = cli({"analyze", "--topology", "two-link", "--max-links", "30"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("CSV layout and values") {
  const auto r = cli({"analyze", "--topology", "two-link", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == csma::cli::kCsvHeader);
  const auto c = cells(ls[1]);
  REQUIRE(c.size() == 12);
  CHECK(c[0] == "two-link");
  CHECK(c[1] == "L1");
  CHECK(c[4] == "0.441831");
  CHECK(c[9] == "0.060606");
  CHECK(c[7].empty());
}

TEST_CASE("Mbps columns are normalized throughput times the rate") {
  const auto r = cli({"analyze", "--topology", "chain4", "--format", "json", "--rate-mbps", "11"});
  REQUIRE(r.code == 0);
  const auto rows = csma::cli::parse_json_report(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].rate_mbps == 11.0);
  const auto csv = cli({"analyze", "--topology", "chain4", "--format", "csv", "--rate-mbps", "11"});
  const auto ls = lines(csv.out);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto c = cells(ls[i + 1]);
    CHECK(std::abs(std::stod(c[3]) - std::stod(c[2]) * 11.0) <= 1e-5);
    CHECK(std::abs(std::stod(c[5]) - *rows[0].links[i].gicn_norm * 11.0) <= 1e-5);
  }
}

TEST_CASE("JSON report round trip") {
  csma::cli::ReportRow row;
  row.topology = "t";
  row.rate_mbps = 2.5;
  csma::cli::LinkReport a;
  a.link = "x";
  a.icn_norm = 0.25;
  a.sim_norm = 0.125;
  a.sim_ci = 0.0625;
  csma::cli::LinkReport b;
  b.link = "y";
  b.gicn_norm = 0.5;
  b.gicn_pcol = 0.03125;
  b.exact_pcol = 0.015625;
  row.links = {a, b};
  std::ostringstream out;
  emit_report({row}, csma::cli::ReportFormat::kJson, out);
  CHECK(csma::cli::parse_json_report(out.str()) == std::vector<csma::cli::ReportRow>{row});
  CHECK_THROWS(csma::cli::parse_json_report("{\"rows\": 3}"));
  CHECK_THROWS(csma::cli::parse_json_report("not json"));

  std::ostringstream empty;
  emit_report({}, csma::cli::ReportFormat::kCsv, empty);
  CHECK(empty.str() == std::string(csma::cli::kCsvHeader) + "\n");
}

TEST_CASE("simulation output is deterministic for a fixed seed") {
  const std::vector<std::string> args = {"simulate", "--topology", "chain3", "--slots", "100000",
                                         "--seed", "5", "--format", "csv"};
  const auto a = cli(args);
  const auto b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto other = args;
  other[6] = "6";
  CHECK(cli(other).out != a.out);
}

TEST_CASE("compare and bench") {
  const auto c = cli({"compare", "--topology", "two-link", "--slots", "100000", "--reps", "2"});
  CHECK(c.code == 0);
  CHECK(c.out.find("±") != std::string::npos);
  const auto b = cli({"bench", "--slots", "20000", "--format", "csv"});
  REQUIRE(b.code == 0);
  CHECK(lines(b.out).size() == 1 + 2 + 3 + 3 + 4 + 4 + 4);
  const auto t = cli({"bench", "--slots", "20000"});
  CHECK(t.code == 0);
  CHECK(t.out.find("star3") != std::string::npos);
}

TEST_CASE("--out writes a file and rejects unwritable paths") {
  const auto path = std::filesystem::temp_directory_path() / "csma_cli_out_test.csv";
  std::filesystem::remove(path);
  const auto r = cli({"analyze", "--topology", "triangle", "--format", "csv", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(path) == cli({"analyze", "--topology", "triangle", "--format", "csv"}).out);
  std::filesystem::remove(path);
  CHECK(cli({"analyze", "--topology", "triangle", "--out", "/nonexistent-dir/x.csv"}).code == 1);
}

TEST_CASE("golden reports") {
  const std::filesystem::path dir = CSMA_TEST_GOLDEN_DIR;
  CHECK(cli({"bench", "--slots", "200000", "--seed", "7", "--format", "csv"}).out ==
        slurp(dir / "bench_200k_seed7.csv"));
  CHECK(cli({"simulate", "--topology", "two-link", "--slots", "200000", "--seed", "7", "--format", "csv"}).out ==
        slurp(dir / "simulate_two_link_seed7.csv"));
  CHECK(cli({"analyze", "--graph", CSMA_TEST_DATA_DIR "/fig1.graph", "--format", "csv"}).out ==
        slurp(dir / "analyze_fig1.csv"));
}

}  // TEST_SUITE
