#include "csma/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "csma/error.hpp"

namespace csma {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

LinkMetrics metrics_from_counters(const std::vector<LinkCounters>& counters,
                                  std::uint64_t measured, double rate_mbps) {
  LinkMetrics m;
  const double slots = static_cast<double>(measured);
  for (const LinkCounters& c : counters) {
    const double th = static_cast<double>(c.success_slots) / slots;
    m.throughput_normalized.push_back(th);
    m.throughput_rate.push_back(th * rate_mbps);
    m.collision_prob.push_back(
        c.attempts > 0 ? static_cast<double>(c.collided_attempts) / static_cast<double>(c.attempts)
                       : 0.0);
  }
  return m;
}

void accumulate(LinkCounters& into, const LinkCounters& c) {
  into.success_slots += c.success_slots;
  into.collided_slots += c.collided_slots;
  into.attempts += c.attempts;
  into.collided_attempts += c.collided_attempts;
  into.countdown_slots += c.countdown_slots;
  into.frozen_slots += c.frozen_slots;
  into.starts += c.starts;
}

// Mean and 95% normal half-width of one column of per-replication values.
std::pair<double, double> mean_and_half_width(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, 1.96 * sd / std::sqrt(n)};
}

}  // namespace

void SimConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::kInvalidArgument, what); };
  if (cw0 < 1) bad("cw0 must be >= 1");
  if (cw_max < cw0) bad("cw_max must be >= cw0");
  if (t_tx < 1) bad("t_tx must be >= 1");
  if (total_slots <= effective_warmup()) bad("total_slots must exceed warmup_slots");
  if (resume_delay < 0) bad("resume_delay must be >= 0");
  if (!(rate_mbps > 0.0) || !std::isfinite(rate_mbps)) bad("rate_mbps must be positive");
}

std::uint64_t replication_seed(std::uint64_t base, std::size_t index) {
  return splitmix64(base ^ static_cast<std::uint64_t>(index));
}

Simulator::Simulator(const ContentionGraph& g, SimConfig config)
    : graph_(&g), config_(config), warmup_(0), rng_(config.seed) {
  config_.validate();
  warmup_ = config_.effective_warmup();
  const std::size_t n = g.size();
  adjacency_.resize(n);
  for (std::size_t i = 0; i < n; ++i) adjacency_[i] = g.neighbors(i).bits();
  state_.resize(n);
  counters_.resize(n);
  for (auto& s : state_) {
    s.current_cw = config_.cw0;
    s.backoff = draw_backoff(s.current_cw);
  }
}

int Simulator::draw_backoff(int cw) {
  if (config_.backoff == BackoffDistribution::kGeometric) {
    return std::geometric_distribution<int>(2.0 / (cw + 2.0))(rng_);
  }
  return std::uniform_int_distribution<int>(0, cw)(rng_);
}

SlotEvents Simulator::step() {
  const std::size_t n = state_.size();
  const auto now = static_cast<std::int64_t>(slot_);
  const bool measured = slot_ >= warmup_;

  // Phase 1: sense the channel as left by the previous slot.
  std::uint64_t busy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const LinkRuntimeState& s = state_[i];
    if (s.tx_remaining > 0 || s.last_tx_end + config_.resume_delay >= now) {
      busy |= std::uint64_t{1} << i;
    }
  }
  SlotEvents ev;
  std::uint64_t starters = 0;
  for (std::size_t i = 0; i < n; ++i) {
    LinkRuntimeState& s = state_[i];
    if (s.tx_remaining > 0) continue;
    if (adjacency_[i] & busy) {
      ev.frozen = ev.frozen.with(i);
      if (measured) ++counters_[i].frozen_slots;
    } else if (s.backoff == 0) {
      starters |= std::uint64_t{1} << i;
    } else {
      --s.backoff;
      if (measured) ++counters_[i].countdown_slots;
    }
  }

  // Phase 2: start, resolve collisions, transmit, finish.
  for (std::size_t i = 0; i < n; ++i) {
    if (!((starters >> i) & 1U)) continue;
    LinkRuntimeState& s = state_[i];
    s.tx_remaining = config_.t_tx;
    s.collided_current = (adjacency_[i] & starters) != 0;
    if (s.collided_current) ev.collided = ev.collided.with(i);
    if (measured) ++counters_[i].starts;
  }
  ev.starters = LinkSet(starters);

  for (std::size_t i = 0; i < n; ++i) {
    LinkRuntimeState& s = state_[i];
    if (s.tx_remaining == 0) continue;
    LinkCounters& c = counters_[i];
    if (measured) ++(s.collided_current ? c.collided_slots : c.success_slots);
    if (--s.tx_remaining > 0) continue;

    ev.finished = ev.finished.with(i);
    s.last_tx_end = now;
    if (measured) {
      ++c.attempts;
      if (s.collided_current) ++c.collided_attempts;
    }
    if (config_.beb_enabled) {
      s.current_cw = s.collided_current ? std::min(2 * (s.current_cw + 1) - 1, config_.cw_max)
                                        : config_.cw0;
    }
    s.collided_current = false;
    s.backoff = draw_backoff(s.current_cw);
  }
  ++slot_;
  return ev;
}

void Simulator::run(std::uint64_t slots) {
  for (std::uint64_t t = 0; t < slots; ++t) step();
}

SimResult Simulator::result() const {
  SimResult r;
  r.seed = config_.seed;
  r.warmup_slots = std::min(slot_, warmup_);
  r.simulated_slots = slot_ - r.warmup_slots;
  r.links = counters_;
  r.metrics = metrics_from_counters(counters_, std::max<std::uint64_t>(r.simulated_slots, 1),
                                    config_.rate_mbps);
  r.per_replication.push_back(r.metrics);
  return r;
}

SimResult run_simulation(const ContentionGraph& g, const SimConfig& config) {
  Simulator sim(g, config);
  sim.run(config.total_slots);
  return sim.result();
}

SimResult run_replications(const ContentionGraph& g, const SimConfig& config, std::size_t n_reps,
                           unsigned threads) {
  if (n_reps < 2) fail(ErrorCode::kInvalidArgument, "replications need n_reps >= 2");
  config.validate();

  std::vector<SimResult> runs(n_reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < n_reps; k = next++) {
      try {
        SimConfig c = config;
        c.seed = replication_seed(config.seed, k);
        runs[k] = run_simulation(g, c);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  unsigned workers = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_reps));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  const std::size_t n = g.size();
  SimResult out;
  out.seed = config.seed;
  out.replications = n_reps;
  out.links.resize(n);
  for (const SimResult& r : runs) {
    out.simulated_slots += r.simulated_slots;
    out.warmup_slots += r.warmup_slots;
    for (std::size_t i = 0; i < n; ++i) accumulate(out.links[i], r.links[i]);
    out.per_replication.push_back(r.metrics);
  }

  out.metrics.throughput_normalized.resize(n);
  out.metrics.throughput_rate.resize(n);
  out.metrics.collision_prob.resize(n);
  out.throughput_ci.resize(n);
  out.collision_ci.resize(n);
  std::vector<double> th(n_reps), pc(n_reps);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n_reps; ++k) {
      th[k] = runs[k].metrics.throughput_normalized[i];
      pc[k] = runs[k].metrics.collision_prob[i];
    }
    const auto [th_mean, th_hw] = mean_and_half_width(th);
    const auto [pc_mean, pc_hw] = mean_and_half_width(pc);
    out.metrics.throughput_normalized[i] = th_mean;
    out.metrics.throughput_rate[i] = th_mean * config.rate_mbps;
    out.metrics.collision_prob[i] = pc_mean;
    out.throughput_ci[i] = th_hw;
    out.collision_ci[i] = pc_hw;
  }
  return out;
}

}  // namespace csma
