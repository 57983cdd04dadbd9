#include "csma_gicn.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>

#include "csma/ctmc.hpp"
#include "csma/error.hpp"
#include "csma/gicn.hpp"
#include "csma/icn.hpp"
#include "csma/sim.hpp"
#include "csma/topology.hpp"

struct csma_graph {
  csma::ContentionGraph graph;
};

struct csma_sim_result {
  csma::SimResult result;
};

namespace {

thread_local std::string last_error;

csma_status to_status(csma::ErrorCode code) {
  switch (code) {
    case csma::ErrorCode::kInvalidArgument: return CSMA_ERR_INVALID_ARGUMENT;
    case csma::ErrorCode::kParse: return CSMA_ERR_PARSE;
    case csma::ErrorCode::kIo: return CSMA_ERR_IO;
    case csma::ErrorCode::kLimitExceeded: return CSMA_ERR_LIMIT;
    case csma::ErrorCode::kUnsupported: return CSMA_ERR_UNSUPPORTED;
    case csma::ErrorCode::kModelDomain: return CSMA_ERR_MODEL_DOMAIN;
    case csma::ErrorCode::kNumeric: return CSMA_ERR_NUMERIC;
  }
  return CSMA_ERR_INTERNAL;
}

csma_status failure(csma_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body() and converts any exception into a status plus last_error.
template <class F>
csma_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return CSMA_OK;
  } catch (const csma::Error& e) {
    return failure(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return failure(CSMA_ERR_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return failure(CSMA_ERR_INTERNAL, e.what());
  } catch (...) {
    return failure(CSMA_ERR_INTERNAL, "unknown error");
  }
}

csma_status null_argument(const char* name) {
  return failure(CSMA_ERR_INVALID_ARGUMENT, std::string(name) + " must not be null");
}

template <class Make>
csma_status make_graph(csma_graph** out, Make&& make) {
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new csma_graph{make()}; });
}

csma::StateSpaceLimits limits_from(size_t max_links) {
  if (max_links == 0 || max_links > csma::kHardMaxLinks) {
    csma::fail(csma::ErrorCode::kInvalidArgument,
               "max_links must be in [1, " + std::to_string(csma::kHardMaxLinks) + "]");
  }
  return csma::StateSpaceLimits{max_links};
}

void write_metrics(const csma::LinkMetrics& m, csma_link_metrics* out) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    out[i] = {m.throughput_normalized[i], m.throughput_rate[i], m.collision_prob[i]};
  }
}

csma::LinkMetrics icn_metrics(const csma::ContentionGraph& g, const csma::AccessIntensities& rho,
                              double rate_mbps, csma::StateSpaceLimits limits) {
  const auto th = csma::icn_throughput(csma::icn_distribution(g, rho, limits));
  csma::LinkMetrics m;
  m.throughput_normalized = th;
  for (double t : th) m.throughput_rate.push_back(t * rate_mbps);
  m.collision_prob.assign(th.size(), 0.0);
  return m;
}

void check_rate(double rate_mbps) {
  if (!(rate_mbps > 0.0) || !std::isfinite(rate_mbps)) {
    csma::fail(csma::ErrorCode::kInvalidArgument, "rate_mbps must be positive and finite");
  }
}

}  // namespace

extern "C" {

const char* csma_last_error(void) { return last_error.c_str(); }

const char* csma_version(void) { return "1.0.0"; }

csma_status csma_graph_parse(const char* text, csma_graph** out) {
  if (text == nullptr) return null_argument("text");
  return make_graph(out, [&] { return csma::parse_graph(text); });
}

csma_status csma_graph_load(const char* path, csma_graph** out) {
  if (path == nullptr) return null_argument("path");
  return make_graph(out, [&] { return csma::load_graph_file(path); });
}

csma_status csma_graph_builtin(const char* name, csma_graph** out) {
  if (name == nullptr) return null_argument("name");
  return make_graph(out, [&] { return csma::builtin_topology(name); });
}

void csma_graph_free(csma_graph* g) { delete g; }

size_t csma_graph_link_count(const csma_graph* g) { return g ? g->graph.size() : 0; }

const char* csma_graph_link_id(const csma_graph* g, size_t index) {
  if (g == nullptr || index >= g->graph.size()) return nullptr;
  return g->graph.link_id(index).c_str();
}

size_t csma_graph_edge_count(const csma_graph* g) { return g ? g->graph.edges().size() : 0; }

csma_status csma_graph_edge(const csma_graph* g, size_t index, size_t* a, size_t* b) {
  if (g == nullptr) return null_argument("graph");
  if (a == nullptr || b == nullptr) return null_argument("a/b");
  if (index >= g->graph.edges().size()) {
    return failure(CSMA_ERR_INVALID_ARGUMENT, "edge index out of range");
  }
  last_error.clear();
  *a = g->graph.edges()[index].first;
  *b = g->graph.edges()[index].second;
  return CSMA_OK;
}

csma_status csma_graph_feasible_state_count(const csma_graph* g, size_t max_links, size_t* out) {
  if (g == nullptr) return null_argument("graph");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = csma::enumerate_feasible_states(g->graph, limits_from(max_links)).size();
  });
}

size_t csma_builtin_count(void) { return csma::builtin_topology_names().size(); }

const char* csma_builtin_name(size_t index) {
  const auto& names = csma::builtin_topology_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

void csma_analysis_params_init(csma_analysis_params* p) {
  if (p == nullptr) return;
  p->cw = 31;
  p->rho = 83.0 / 15.5;
  p->rate_mbps = csma::kDefaultRateMbps;
  p->max_links = csma::kDefaultMaxLinks;
}

csma_status csma_analyze(const csma_graph* g, csma_model model, const csma_analysis_params* params,
                         csma_link_metrics* out, size_t len) {
  if (g == nullptr) return null_argument("graph");
  if (params == nullptr) return null_argument("params");
  if (out == nullptr) return null_argument("out");
  if (len < g->graph.size()) {
    return failure(CSMA_ERR_INVALID_ARGUMENT, "output buffer shorter than the link count");
  }
  return guarded([&] {
    const auto limits = limits_from(params->max_links);
    check_rate(params->rate_mbps);
    if (params->cw < 0) csma::fail(csma::ErrorCode::kInvalidArgument, "cw must be >= 0");
    const auto collision = params->cw == 0 ? csma::CollisionParams::collision_free()
                                           : csma::CollisionParams::from_window(params->cw);
    switch (model) {
      case CSMA_MODEL_ICN:
        write_metrics(icn_metrics(g->graph, csma::AccessIntensities::uniform(g->graph.size(), params->rho),
                                  params->rate_mbps, limits),
                      out);
        return;
      case CSMA_MODEL_GICN: {
        const auto space = csma::build_augmented_space(g->graph, collision, limits);
        const auto w = csma::gicn_weights(g->graph, space, params->rho, collision);
        write_metrics(csma::gicn_metrics(g->graph, space, w, params->rate_mbps), out);
        return;
      }
      case CSMA_MODEL_EXACT: {
        const auto space = csma::build_augmented_space(g->graph, collision, limits);
        const auto q = csma::build_rate_matrix(g->graph, space, params->rho, collision);
        const auto dist = csma::solve_stationary(q, g->graph.size());
        write_metrics(csma::ctmc_metrics(g->graph, space, dist, params->rate_mbps), out);
        return;
      }
    }
    csma::fail(csma::ErrorCode::kInvalidArgument, "unknown model selector");
  });
}

csma_status csma_analyze_icn_heterogeneous(const csma_graph* g, const double* rho, double rate_mbps,
                                           size_t max_links, csma_link_metrics* out, size_t len) {
  if (g == nullptr) return null_argument("graph");
  if (rho == nullptr) return null_argument("rho");
  if (out == nullptr) return null_argument("out");
  if (len < g->graph.size()) {
    return failure(CSMA_ERR_INVALID_ARGUMENT, "output buffer shorter than the link count");
  }
  return guarded([&] {
    check_rate(rate_mbps);
    const csma::AccessIntensities intensities(std::vector<double>(rho, rho + g->graph.size()));
    write_metrics(icn_metrics(g->graph, intensities, rate_mbps, limits_from(max_links)), out);
  });
}

void csma_sim_config_init(csma_sim_config* c) {
  if (c == nullptr) return;
  const csma::SimConfig d;
  c->cw0 = d.cw0;
  c->cw_max = d.cw_max;
  c->beb_enabled = d.beb_enabled ? 1 : 0;
  c->t_tx = d.t_tx;
  c->total_slots = d.total_slots;
  c->warmup_slots = -1;
  c->seed = d.seed;
  c->geometric_backoff = 0;
  c->resume_delay = d.resume_delay;
  c->rate_mbps = d.rate_mbps;
}

csma_status csma_simulate(const csma_graph* g, const csma_sim_config* cfg, size_t reps,
                          unsigned threads, csma_sim_result** out) {
  if (g == nullptr) return null_argument("graph");
  if (cfg == nullptr) return null_argument("config");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  if (reps == 0) return failure(CSMA_ERR_INVALID_ARGUMENT, "reps must be >= 1");
  return guarded([&] {
    csma::SimConfig c;
    c.cw0 = cfg->cw0;
    c.cw_max = cfg->cw_max;
    c.beb_enabled = cfg->beb_enabled != 0;
    c.t_tx = cfg->t_tx;
    c.total_slots = cfg->total_slots;
    if (cfg->warmup_slots >= 0) c.warmup_slots = static_cast<std::uint64_t>(cfg->warmup_slots);
    c.seed = cfg->seed;
    c.backoff = cfg->geometric_backoff ? csma::BackoffDistribution::kGeometric
                                       : csma::BackoffDistribution::kUniform;
    c.resume_delay = cfg->resume_delay;
    c.rate_mbps = cfg->rate_mbps;
    auto r = reps == 1 ? csma::run_simulation(g->graph, c)
                       : csma::run_replications(g->graph, c, reps, threads);
    *out = new csma_sim_result{std::move(r)};
  });
}

void csma_sim_result_free(csma_sim_result* r) { delete r; }

size_t csma_sim_link_count(const csma_sim_result* r) { return r ? r->result.links.size() : 0; }

size_t csma_sim_replications(const csma_sim_result* r) { return r ? r->result.replications : 0; }

uint64_t csma_sim_measured_slots(const csma_sim_result* r) {
  return r ? r->result.simulated_slots : 0;
}

uint64_t csma_sim_seed(const csma_sim_result* r) { return r ? r->result.seed : 0; }

csma_status csma_sim_link_stats_get(const csma_sim_result* r, size_t link,
                                    csma_sim_link_stats* out) {
  if (r == nullptr) return null_argument("result");
  if (out == nullptr) return null_argument("out");
  const csma::SimResult& s = r->result;
  if (link >= s.links.size()) return failure(CSMA_ERR_INVALID_ARGUMENT, "link index out of range");
  last_error.clear();
  const csma::LinkCounters& c = s.links[link];
  out->metrics = {s.metrics.throughput_normalized[link], s.metrics.throughput_rate[link],
                  s.metrics.collision_prob[link]};
  out->throughput_ci = s.throughput_ci.empty() ? 0.0 : s.throughput_ci[link];
  out->collision_ci = s.collision_ci.empty() ? 0.0 : s.collision_ci[link];
  out->success_slots = c.success_slots;
  out->collided_slots = c.collided_slots;
  out->attempts = c.attempts;
  out->collided_attempts = c.collided_attempts;
  out->countdown_slots = c.countdown_slots;
  out->frozen_slots = c.frozen_slots;
  out->starts = c.starts;
  return CSMA_OK;
}

}  // extern "C"
