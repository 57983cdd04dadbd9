#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "csma/graph.hpp"
#include "csma/metrics.hpp"

namespace csma {

enum class BackoffDistribution {
  kUniform,    // integer uniform on [0, cw]
  kGeometric,  // geometric on {0, 1, ...} with the same mean cw / 2
};

struct SimConfig {
  int cw0 = 31;
  int cw_max = 1023;
  bool beb_enabled = false;
  int t_tx = 83;  // mini-slots per transmission
  std::uint64_t total_slots = 10'000'000;     // includes the warmup
  std::optional<std::uint64_t> warmup_slots;  // default: 5% of total_slots
  std::uint64_t seed = 1;
  BackoffDistribution backoff = BackoffDistribution::kUniform;
  // Idle slots a frozen link must sense after a neighbour's transmission ends
  // before it resumes counting down. The link that just finished is not
  // delayed. 0 resumes in the first idle slot.
  int resume_delay = 1;
  double rate_mbps = kDefaultRateMbps;

  std::uint64_t effective_warmup() const { return warmup_slots.value_or(total_slots / 20); }
  std::uint64_t measured_slots() const { return total_slots - effective_warmup(); }
  // Requires cw0 >= 1, cw_max >= cw0, t_tx >= 1, total_slots > warmup,
  // resume_delay >= 0 and a positive rate. Throws Error(kInvalidArgument)
  // naming the offending field.
  void validate() const;
};

struct LinkRuntimeState {
  int backoff = 0;
  int tx_remaining = 0;  // 0 = not transmitting
  bool collided_current = false;
  int current_cw = 31;
  std::int64_t last_tx_end = std::numeric_limits<std::int32_t>::min();  // slot of last tx slot
};

struct SlotEvents {
  LinkSet starters;
  LinkSet collided;  // starters that heard another starter next to them
  LinkSet finished;
  LinkSet frozen;
};

// Every slot of a link falls in exactly one of countdown, frozen,
// success_slots or collided_slots.
struct LinkCounters {
  std::uint64_t success_slots = 0;
  std::uint64_t collided_slots = 0;
  std::uint64_t attempts = 0;  // transmissions completed in the window
  std::uint64_t collided_attempts = 0;
  std::uint64_t countdown_slots = 0;
  std::uint64_t frozen_slots = 0;
  std::uint64_t starts = 0;

  friend bool operator==(const LinkCounters&, const LinkCounters&) = default;
};

struct SimResult {
  std::uint64_t seed = 0;
  std::uint64_t simulated_slots = 0;  // measured slots, warmup excluded, summed over replications
  std::uint64_t warmup_slots = 0;
  std::size_t replications = 1;
  std::vector<LinkCounters> links;
  LinkMetrics metrics;
  // 95% normal-approximation half-widths across replications; empty for a
  // single run.
  std::vector<double> throughput_ci;
  std::vector<double> collision_ci;
  std::vector<LinkMetrics> per_replication;
};

/// Discrete-time mini-slot CSMA with freezing, fixed-length transmissions
/// and collisions between neighbours that start in the same slot. Each slot
/// is evaluated against the previous slot's channel snapshot, so the link
/// update order is irrelevant.
class Simulator {
 public:
  Simulator(const ContentionGraph& g, SimConfig config);

  SlotEvents step();
  void run(std::uint64_t slots);

  std::uint64_t slot() const { return slot_; }
  const std::vector<LinkRuntimeState>& links() const { return state_; }
  void set_link_state(std::size_t i, const LinkRuntimeState& s) { state_.at(i) = s; }
  const std::vector<LinkCounters>& counters() const { return counters_; }
  SimResult result() const;

 private:
  int draw_backoff(int cw);

  const ContentionGraph* graph_;
  SimConfig config_;
  std::uint64_t warmup_;
  std::mt19937_64 rng_;
  std::vector<std::uint64_t> adjacency_;
  std::vector<LinkRuntimeState> state_;
  std::vector<LinkCounters> counters_;
  std::uint64_t slot_ = 0;
};

SimResult run_simulation(const ContentionGraph& g, const SimConfig& config);

// seed_i = splitmix64(base XOR i)
std::uint64_t replication_seed(std::uint64_t base, std::size_t index);

// n_reps >= 2 independent runs; counters are summed, metrics are means over
// replications with 95% half-widths. Runs on up to `threads` workers
// (0 = hardware concurrency); the result does not depend on the thread count.
SimResult run_replications(const ContentionGraph& g, const SimConfig& config, std::size_t n_reps,
                           unsigned threads = 0);

}  // namespace csma
