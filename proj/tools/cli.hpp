#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"

namespace csma::cli {

enum class Command { kAnalyze, kSimulate, kCompare, kBench };

struct ModelSelection {
  bool icn = true;
  bool gicn = true;
  bool exact = true;
};

struct RunSpec {
  Command command = Command::kAnalyze;
  std::optional<std::string> graph_path;
  std::optional<std::string> topology;
  ModelSelection models;
  int cw = 31;
  int t_tx = 83;
  std::optional<double> rho;  // overrides 2 t_tx / cw for the analytical models
  double rate_mbps = 7.229;
  std::uint64_t slots = 10'000'000;
  std::optional<std::uint64_t> warmup;
  std::uint64_t seed = 1;
  std::size_t reps = 1;
  bool beb = false;
  int cw_max = 1023;
  int resume_delay = 1;
  std::size_t max_links = 25;
  unsigned threads = 0;
  ReportFormat format = ReportFormat::kTable;
  std::optional<std::string> out_path;

  double effective_rho() const { return rho.value_or(2.0 * t_tx / cw); }
};

enum ExitCode { kExitOk = 0, kExitInput = 1, kExitLimit = 2 };

// Parses argv (argv[0] is the program name), runs the command and writes the
// report to `out` or --out. Diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csma::cli
