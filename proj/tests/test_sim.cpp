#include <doctest.h>

#include <cmath>
#include <random>

#include "csma/error.hpp"
#include "csma/gicn.hpp"
#include "csma/sim.hpp"
#include "csma/topology.hpp"
#include "support/graphs.hpp"
#include "support/oracles.hpp"

using namespace csma;

namespace {

SimConfig short_run(std::uint64_t slots, std::uint64_t seed = 1) {
  SimConfig c;
  c.total_slots = slots;
  c.seed = seed;
  return c;
}

LinkRuntimeState idle(int backoff, int cw = 31) {
  LinkRuntimeState s;
  s.backoff = backoff;
  s.current_cw = cw;
  return s;
}

LinkRuntimeState transmitting(int remaining, bool collided = false) {
  LinkRuntimeState s;
  s.tx_remaining = remaining;
  s.collided_current = collided;
  return s;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("config validation") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.effective_warmup() == 500'000);
  CHECK(c.measured_slots() == 9'500'000);
  auto rejects = [](auto mutate) {
    SimConfig bad;
    mutate(bad);
    CHECK_THROWS_AS(bad.validate(), Error);
  };
  rejects([](SimConfig& b) { b.cw0 = 0; });
  rejects([](SimConfig& b) { b.cw_max = 15; });
  rejects([](SimConfig& b) { b.t_tx = 0; });
  rejects([](SimConfig& b) { b.warmup_slots = b.total_slots; });
  rejects([](SimConfig& b) { b.resume_delay = -1; });
  rejects([](SimConfig& b) { b.rate_mbps = 0.0; });
}

TEST_CASE("step: two links at zero backoff collide") {
  const auto g = builtin_topology("two-link");
  Simulator sim(g, short_run(1000));
  sim.set_link_state(0, idle(0));
  sim.set_link_state(1, idle(0));
  const auto ev = sim.step();
  CHECK(ev.starters == g.all_links());
  CHECK(ev.collided == g.all_links());
  CHECK(sim.links()[0].collided_current);
  CHECK(sim.links()[1].collided_current);
  CHECK(sim.links()[0].tx_remaining == 82);
}

TEST_CASE("step: non-neighbours overlap freely") {
  const auto g = builtin_topology("chain3");
  Simulator sim(g, short_run(1000));
  sim.set_link_state(0, transmitting(40));
  sim.set_link_state(1, idle(4));
  sim.set_link_state(2, idle(0));
  const auto ev = sim.step();
  CHECK(ev.starters == LinkSet::single(2));
  CHECK(ev.collided.empty());
  CHECK(ev.frozen == LinkSet::single(1));
  CHECK(sim.links()[1].backoff == 4);
  CHECK(sim.links()[2].tx_remaining == 82);
  CHECK_FALSE(sim.links()[2].collided_current);
}

TEST_CASE("step: an isolated link counts down one slot") {
  const auto g = parse_graph("links: solo\n");
  Simulator sim(g, short_run(1000));
  sim.set_link_state(0, idle(7));
  const auto ev = sim.step();
  CHECK(sim.links()[0].backoff == 6);
  CHECK(sim.links()[0].tx_remaining == 0);
  CHECK(ev.starters.empty());
  CHECK(ev.frozen.empty());
}

TEST_CASE("step: a transmission occupies t_tx slots starting with the start slot") {
  const auto g = parse_graph("links: solo\n");
  SimConfig c = short_run(1000);
  c.t_tx = 3;
  c.warmup_slots = 0;
  Simulator sim(g, c);
  sim.set_link_state(0, idle(0));
  CHECK(sim.step().starters == LinkSet::single(0));
  CHECK(sim.step().finished.empty());
  CHECK(sim.step().finished == LinkSet::single(0));
  CHECK(sim.counters()[0].success_slots == 3);
  CHECK(sim.counters()[0].attempts == 1);
}

TEST_CASE("resume delay after a neighbour's transmission") {
  const auto g = builtin_topology("two-link");
  for (int delay : {0, 1, 3}) {
    CAPTURE(delay);
    SimConfig c = short_run(1000);
    c.resume_delay = delay;
    Simulator sim(g, c);
    sim.set_link_state(0, transmitting(1));
    sim.set_link_state(1, idle(5));
    sim.step();  // link 0's last transmission slot; link 1 frozen
    CHECK(sim.links()[1].backoff == 5);
    for (int k = 0; k < delay; ++k) {
      CHECK(sim.step().frozen.contains(1));
      CHECK(sim.links()[1].backoff == 5);
    }
    CHECK_FALSE(sim.step().frozen.contains(1));
    CHECK(sim.links()[1].backoff == 4);
  }
}

TEST_CASE("the finishing link is not delayed") {
  const auto g = builtin_topology("two-link");
  SimConfig c = short_run(1000);
  c.resume_delay = 2;
  Simulator sim(g, c);
  sim.set_link_state(0, transmitting(1));
  sim.set_link_state(1, transmitting(50));
  sim.step();
  LinkRuntimeState after = sim.links()[0];
  after.backoff = 0;
  sim.set_link_state(0, after);
  // Link 1 is still on the air, so link 0 is blocked by it, not by itself.
  CHECK(sim.step().frozen.contains(0));

  const auto solo = parse_graph("links: solo\n");
  Simulator alone(solo, c);
  alone.set_link_state(0, transmitting(1));
  alone.step();
  LinkRuntimeState s = alone.links()[0];
  s.backoff = 0;
  alone.set_link_state(0, s);
  CHECK(alone.step().starters == LinkSet::single(0));
}

TEST_CASE("binary exponential backoff doubles on collision and resets on success") {
  const auto g = builtin_topology("two-link");
  SimConfig c = short_run(1000);
  c.beb_enabled = true;
  c.t_tx = 1;
  c.cw_max = 100;
  Simulator sim(g, c);
  sim.set_link_state(0, idle(0));
  sim.set_link_state(1, idle(0));
  sim.step();
  CHECK(sim.links()[0].current_cw == 63);
  CHECK(sim.links()[1].current_cw == 63);
  CHECK(sim.links()[0].backoff <= 63);
  sim.set_link_state(0, idle(0, 63));
  sim.set_link_state(1, idle(0, 63));
  sim.step();
  CHECK(sim.links()[0].current_cw == 100);
  sim.set_link_state(0, idle(0, 100));
  sim.set_link_state(1, idle(5, 100));
  sim.step();
  CHECK(sim.links()[0].current_cw == 31);
  CHECK(sim.links()[1].current_cw == 100);
}

TEST_CASE("without doubling the window never changes") {
  const auto g = builtin_topology("triangle");
  Simulator sim(g, short_run(20000));
  for (int t = 0; t < 20000; ++t) {
    sim.step();
    for (const auto& s : sim.links()) REQUIRE(s.current_cw == 31);
  }
}

TEST_CASE("safety, synchronization and slot conservation on random graphs") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto g = gen::make_graph(n, gen::random_edges(rng, n, 0.6));
    SimConfig c = short_run(100'000, rng());
    c.cw0 = 7;  // frequent collisions
    c.t_tx = 5 + static_cast<int>(rng() % 20);
    c.beb_enabled = trial % 2 == 1;
    c.resume_delay = static_cast<int>(trial % 3);
    Simulator sim(g, c);
    for (std::uint64_t t = 0; t < c.total_slots; ++t) {
      sim.step();
      const auto& st = sim.links();
      for (const auto& e : g.edges()) {
        const auto& a = st[e.first];
        const auto& b = st[e.second];
        // Two neighbours never both carry a clean transmission.
        REQUIRE_FALSE((a.tx_remaining > 0 && !a.collided_current && b.tx_remaining > 0 &&
                       !b.collided_current));
        // A clean transmission has no neighbour on the air at all.
        if (a.tx_remaining > 0 && !a.collided_current) REQUIRE(b.tx_remaining == 0);
      }
      for (std::size_t i = 0; i < st.size(); ++i) {
        if (!(st[i].tx_remaining > 0 && st[i].collided_current)) continue;
        // A collided link shares its start and end slots with a collided neighbour.
        bool partner = false;
        for (std::size_t j : g.neighbors(i).indices()) {
          partner |= st[j].collided_current && st[j].tx_remaining == st[i].tx_remaining;
        }
        REQUIRE(partner);
      }
    }
    const auto r = sim.result();
    REQUIRE(r.simulated_slots == c.measured_slots());
    for (const auto& k : r.links) {
      REQUIRE(k.countdown_slots + k.frozen_slots + k.success_slots + k.collided_slots == r.simulated_slots);
      REQUIRE(k.success_slots + k.collided_slots <= r.simulated_slots);
      REQUIRE(k.collided_attempts <= k.attempts);
    }
  }
}

TEST_CASE("isolated link start probability matches 2/(cw+2)") {
  const auto g = parse_graph("links: solo\n");
  for (int cw : {15, 31, 63}) {
    SimConfig c = short_run(2'000'000, 5);
    c.cw0 = cw;
    const auto r = run_replications(g, c, 10, 1);
    std::vector<double> ratios;
    double mean = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
      // Per replication: starts over countdown opportunities.
      SimConfig one = c;
      one.seed = replication_seed(c.seed, k);
      const auto single = run_simulation(g, one);
      const auto& l = single.links[0];
      ratios.push_back(static_cast<double>(l.starts) / static_cast<double>(l.countdown_slots + l.starts));
      mean += ratios.back() / 10.0;
    }
    double ss = 0.0;
    for (double x : ratios) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / 9.0) / std::sqrt(10.0);
    CAPTURE(cw);
    CHECK(std::abs(mean - 2.0 / (cw + 2.0)) <= 3.0 * se);
    CHECK(r.links[0].collided_attempts == 0);
  }
}

TEST_CASE("edgeless graph throughput follows the renewal closed form") {
  const auto g = gen::make_graph(2, {});
  for (int cw : {15, 31}) {
    SimConfig c = short_run(2'000'000, 3);
    c.cw0 = cw;
    const auto r = run_replications(g, c, 4, 1);
    const double expected = oracle::isolated_link_throughput(83, cw);
    const double rho = 2.0 * 83 / cw;
    CHECK(expected == doctest::Approx(rho / (1.0 + rho)).epsilon(1e-15));
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(r.metrics.throughput_normalized[i] - expected) <= 0.002);
      CHECK(r.metrics.collision_prob[i] == 0.0);
    }
  }
}

TEST_CASE("two-link simulation sits near the analytical model") {
  const auto g = builtin_topology("two-link");
  const auto r = run_replications(g, short_run(4'000'000, 11), 4, 1);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(r.metrics.throughput_normalized[i] - 0.4418) <= 0.004);
    CHECK(std::abs(r.metrics.collision_prob[i] - 0.0607) <= 0.004);
  }
}

TEST_CASE("determinism and seed sensitivity") {
  const auto g = builtin_topology("fig1");
  const auto a = run_simulation(g, short_run(300'000, 42));
  const auto b = run_simulation(g, short_run(300'000, 42));
  const auto other = run_simulation(g, short_run(300'000, 43));
  CHECK(a.links == b.links);
  CHECK(a.metrics.throughput_normalized == b.metrics.throughput_normalized);
  CHECK(a.metrics.collision_prob == b.metrics.collision_prob);
  CHECK(a.seed == 42);
  CHECK_FALSE(a.links == other.links);

  const auto r1 = run_replications(g, short_run(200'000, 9), 5, 1);
  const auto r3 = run_replications(g, short_run(200'000, 9), 5, 3);
  CHECK(r1.links == r3.links);
  CHECK(r1.metrics.throughput_normalized == r3.metrics.throughput_normalized);
  CHECK(r1.throughput_ci == r3.throughput_ci);
  CHECK(r1.collision_ci == r3.collision_ci);
}

TEST_CASE("replication seeds are distinct and mixed") {
  CHECK(replication_seed(1, 0) != replication_seed(1, 1));
  CHECK(replication_seed(1, 0) != replication_seed(2, 0));
  CHECK(replication_seed(1, 0) != 1);
}

TEST_CASE("replications: identical per-replication results give zero half-width") {
  // The link is on the air for the whole measured window in every replication.
  const auto g = parse_graph("links: solo\n");
  SimConfig c = short_run(1000);
  c.t_tx = 1'000'000;
  c.warmup_slots = 100;
  const auto r = run_replications(g, c, 2, 1);
  CHECK(r.metrics.throughput_normalized[0] == 1.0);
  CHECK(r.throughput_ci[0] == 0.0);
  CHECK(r.collision_ci[0] == 0.0);
  CHECK(r.replications == 2);
  CHECK(r.per_replication.size() == 2);
  CHECK_THROWS_AS(run_replications(g, c, 1), Error);
}

TEST_CASE("uniform and geometric backoff of equal mean agree within 1%") {
  const auto g = builtin_topology("two-link");
  SimConfig u = short_run(5'000'000, 8);
  SimConfig geo = u;
  geo.backoff = BackoffDistribution::kGeometric;
  const auto ru = run_replications(g, u, 4, 1);
  const auto rg = run_replications(g, geo, 4, 1);
  for (std::size_t i = 0; i < 2; ++i) {
    const double a = ru.metrics.throughput_normalized[i];
    const double b = rg.metrics.throughput_normalized[i];
    CHECK(std::abs(a - b) / a < 0.01);
  }
}

TEST_CASE("warmup is excluded from the counters") {
  const auto g = builtin_topology("chain3");
  SimConfig c = short_run(50'000);
  c.warmup_slots = 20'000;
  const auto r = run_simulation(g, c);
  CHECK(r.simulated_slots == 30'000);
  CHECK(r.warmup_slots == 20'000);
  for (const auto& k : r.links) CHECK(k.countdown_slots + k.frozen_slots + k.success_slots + k.collided_slots == 30'000);
}

}  // TEST_SUITE
