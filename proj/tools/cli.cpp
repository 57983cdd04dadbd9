#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "csma_gicn.h"

namespace csma::cli {

namespace {

// Carries the exit code chosen for a failed C API call.
struct CommandError : std::runtime_error {
  CommandError(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

int exit_code_for(csma_status status) {
  switch (status) {
    case CSMA_OK: return kExitOk;
    case CSMA_ERR_LIMIT:
    case CSMA_ERR_NUMERIC:
    case CSMA_ERR_INTERNAL: return kExitLimit;
    default: return kExitInput;
  }
}

void check(csma_status status, const std::string& context) {
  if (status != CSMA_OK) {
    throw CommandError(exit_code_for(status), context + ": " + csma_last_error());
  }
}

struct GraphDeleter {
  void operator()(csma_graph* g) const { csma_graph_free(g); }
};
struct ResultDeleter {
  void operator()(csma_sim_result* r) const { csma_sim_result_free(r); }
};
using GraphPtr = std::unique_ptr<csma_graph, GraphDeleter>;
using ResultPtr = std::unique_ptr<csma_sim_result, ResultDeleter>;

GraphPtr builtin(const std::string& name) {
  csma_graph* g = nullptr;
  check(csma_graph_builtin(name.c_str(), &g), "--topology");
  return GraphPtr(g);
}

GraphPtr load_graph(const RunSpec& spec) {
  if (spec.topology) return builtin(*spec.topology);
  csma_graph* g = nullptr;
  check(csma_graph_load(spec.graph_path->c_str(), &g), "--graph");
  return GraphPtr(g);
}

std::string topology_label(const RunSpec& spec) {
  return spec.topology ? *spec.topology : std::filesystem::path(*spec.graph_path).stem().string();
}

ReportRow empty_row(const csma_graph* g, std::string topology, double rate) {
  ReportRow row;
  row.topology = std::move(topology);
  row.rate_mbps = rate;
  for (std::size_t i = 0; i < csma_graph_link_count(g); ++i) {
    LinkReport l;
    l.link = csma_graph_link_id(g, i);
    row.links.push_back(std::move(l));
  }
  return row;
}

std::vector<csma_link_metrics> analyze(const csma_graph* g, csma_model model, const RunSpec& spec) {
  csma_analysis_params params;
  csma_analysis_params_init(&params);
  params.cw = spec.cw;
  params.rho = spec.effective_rho();
  params.rate_mbps = spec.rate_mbps;
  params.max_links = spec.max_links;
  std::vector<csma_link_metrics> m(csma_graph_link_count(g));
  static constexpr const char* kNames[] = {"icn", "gicn", "exact"};
  check(csma_analyze(g, model, &params, m.data(), m.size()),
        fmt::format("{} model", kNames[static_cast<int>(model)]));
  return m;
}

void fill_analytics(const csma_graph* g, const RunSpec& spec, ReportRow& row) {
  if (spec.models.icn) {
    const auto m = analyze(g, CSMA_MODEL_ICN, spec);
    for (std::size_t i = 0; i < m.size(); ++i) row.links[i].icn_norm = m[i].throughput_normalized;
  }
  if (spec.models.gicn) {
    const auto m = analyze(g, CSMA_MODEL_GICN, spec);
    for (std::size_t i = 0; i < m.size(); ++i) {
      row.links[i].gicn_norm = m[i].throughput_normalized;
      row.links[i].gicn_pcol = m[i].collision_prob;
    }
  }
  if (spec.models.exact) {
    const auto m = analyze(g, CSMA_MODEL_EXACT, spec);
    for (std::size_t i = 0; i < m.size(); ++i) {
      row.links[i].exact_norm = m[i].throughput_normalized;
      row.links[i].exact_pcol = m[i].collision_prob;
    }
  }
}

void fill_simulation(const csma_graph* g, const RunSpec& spec, ReportRow& row) {
  csma_sim_config cfg;
  csma_sim_config_init(&cfg);
  cfg.cw0 = spec.cw;
  cfg.cw_max = spec.cw_max;
  cfg.beb_enabled = spec.beb ? 1 : 0;
  cfg.t_tx = spec.t_tx;
  cfg.total_slots = spec.slots;
  cfg.warmup_slots = spec.warmup ? static_cast<std::int64_t>(*spec.warmup) : -1;
  cfg.seed = spec.seed;
  cfg.resume_delay = spec.resume_delay;
  cfg.rate_mbps = spec.rate_mbps;

  csma_sim_result* raw = nullptr;
  check(csma_simulate(g, &cfg, spec.reps, spec.threads, &raw), "simulation");
  const ResultPtr result(raw);
  for (std::size_t i = 0; i < row.links.size(); ++i) {
    csma_sim_link_stats s;
    check(csma_sim_link_stats_get(result.get(), i, &s), "simulation");
    LinkReport& l = row.links[i];
    l.sim_norm = s.metrics.throughput_normalized;
    l.sim_pcol = s.metrics.collision_prob;
    if (spec.reps > 1) {
      l.sim_ci = s.throughput_ci;
      l.sim_pcol_ci = s.collision_ci;
    }
  }
}

void execute(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  if (spec.max_links > 25) {
    err << fmt::format("warning: --max-links {} allows up to 2^{} states per graph\n",
                       spec.max_links, spec.max_links);
  }
  std::vector<ReportRow> rows;
  const bool table = spec.format == ReportFormat::kTable;

  switch (spec.command) {
    case Command::kAnalyze: {
      const GraphPtr g = load_graph(spec);
      rows.push_back(empty_row(g.get(), topology_label(spec), spec.rate_mbps));
      fill_analytics(g.get(), spec, rows.back());
      break;
    }
    case Command::kSimulate: {
      const GraphPtr g = load_graph(spec);
      rows.push_back(empty_row(g.get(), topology_label(spec), spec.rate_mbps));
      fill_simulation(g.get(), spec, rows.back());
      break;
    }
    case Command::kCompare: {
      const GraphPtr g = load_graph(spec);
      ReportRow row = empty_row(g.get(), topology_label(spec), spec.rate_mbps);
      fill_analytics(g.get(), spec, row);
      if (table) {
        emit_report({row}, ReportFormat::kTable, out);
        out << '\n';
      }
      fill_simulation(g.get(), spec, row);
      rows.push_back(std::move(row));
      break;
    }
    case Command::kBench: {
      for (std::size_t k = 0; k < csma_builtin_count(); ++k) {
        const std::string name = csma_builtin_name(k);
        const GraphPtr g = builtin(name);
        ReportRow row = empty_row(g.get(), name, spec.rate_mbps);
        fill_analytics(g.get(), spec, row);
        fill_simulation(g.get(), spec, row);
        if (table) {
          if (k > 0) out << '\n';
          emit_report({row}, ReportFormat::kTable, out);
        } else {
          rows.push_back(std::move(row));
        }
      }
      if (table) return;
      break;
    }
  }
  emit_report(rows, spec.format, out);
}

struct Options {
  bool graph = false;
  bool model = false;
  bool analytics = false;  // cw, ttx, rho
  bool simulation = false;
  bool bench = false;
};

void add_options(CLI::App& sub, RunSpec& spec, std::string& model, std::string& format,
                 Options which) {
  if (which.graph) {
    auto* graph = sub.add_option("--graph", spec.graph_path, "Contention graph file (line or JSON format)");
    auto* topo = sub.add_option("--topology", spec.topology, "Built-in topology name");
    graph->excludes(topo);
    topo->excludes(graph);
  }
  if (which.model) {
    sub.add_option("--model", model, "Analytical model")
        ->check(CLI::IsMember({"icn", "gicn", "exact", "all"}));
  }
  if (which.analytics || which.simulation) {
    sub.add_option("--cw", spec.cw, "Contention window (mini-slots)")->check(CLI::Range(1, 1 << 20));
    auto* ttx = sub.add_option("--ttx", spec.t_tx, "Transmission length (mini-slots)")
                    ->check(CLI::Range(1, 1 << 24));
    if (which.analytics) {
      sub.add_option("--rho", spec.rho, "Access intensity override for the analytical models")
          ->check(CLI::PositiveNumber)
          ->excludes(ttx);
    }
  }
  if (which.simulation || which.bench) {
    sub.add_option("--slots", spec.slots, "Simulated mini-slots per replication, warmup included")
        ->check(CLI::PositiveNumber);
    sub.add_option("--seed", spec.seed, "Base RNG seed");
    sub.add_option("--reps", spec.reps, "Independent replications")->check(CLI::Range(1, 100000));
    sub.add_option("--threads", spec.threads, "Worker threads for replications (0 = all cores)");
  }
  if (which.simulation) {
    sub.add_option("--warmup", spec.warmup, "Slots excluded from the counters (default 5%)");
    sub.add_flag("--beb", spec.beb, "Binary exponential backoff");
    sub.add_option("--cw-max", spec.cw_max, "Window cap under --beb")->check(CLI::Range(1, 1 << 20));
    sub.add_option("--resume-delay", spec.resume_delay,
                   "Idle slots sensed after a neighbour's transmission before resuming countdown")
        ->check(CLI::Range(0, 1 << 20));
  }
  sub.add_option("--rate-mbps", spec.rate_mbps, "Mbps per unit of normalized throughput")
      ->check(CLI::PositiveNumber);
  if (which.analytics || which.bench) {
    sub.add_option("--max-links", spec.max_links, "State-space link cap")->check(CLI::Range(1, 64));
  }
  sub.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
  sub.add_option("--out", spec.out_path, "Write the report to this file");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Throughput and collision analysis of CSMA contention graphs"};
  app.name("csma-gicn");
  app.require_subcommand(1, 1);

  RunSpec spec;
  std::string model = "all";
  std::string format = "table";
  auto* analyze_cmd = app.add_subcommand("analyze", "Analytical models");
  auto* simulate_cmd = app.add_subcommand("simulate", "Mini-slot simulation");
  auto* compare_cmd = app.add_subcommand("compare", "Analytical models next to simulation");
  auto* bench_cmd = app.add_subcommand("bench", "All built-in topologies at the default operating point");
  add_options(*analyze_cmd, spec, model, format, {.graph = true, .model = true, .analytics = true});
  add_options(*simulate_cmd, spec, model, format, {.graph = true, .simulation = true});
  add_options(*compare_cmd, spec, model, format,
              {.graph = true, .model = true, .analytics = true, .simulation = true});
  add_options(*bench_cmd, spec, model, format, {.bench = true});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (analyze_cmd->parsed()) spec.command = Command::kAnalyze;
  if (simulate_cmd->parsed()) spec.command = Command::kSimulate;
  if (compare_cmd->parsed()) spec.command = Command::kCompare;
  if (bench_cmd->parsed()) spec.command = Command::kBench;
  if (spec.command != Command::kBench && !spec.graph_path && !spec.topology) {
    err << "error: one of --graph or --topology is required\n";
    return kExitInput;
  }
  if (model != "all") {
    spec.models = {model == "icn", model == "gicn", model == "exact"};
  }
  spec.format = *parse_format(format);

  std::ofstream file;
  std::ostream* sink = &out;
  if (spec.out_path) {
    file.open(*spec.out_path);
    if (!file) {
      err << "error: --out: cannot open '" << *spec.out_path << "' for writing\n";
      return kExitInput;
    }
    sink = &file;
  }

  try {
    execute(spec, *sink, err);
  } catch (const CommandError& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code;
  }
  if (!*sink) {
    err << "error: failed to write the report\n";
    return kExitInput;
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("csma-gicn");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace csma::cli
