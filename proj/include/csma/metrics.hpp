#pragma once

#include <vector>

namespace csma {

// Link-level result shared by every model and the simulator.
//   throughput_normalized  airtime fraction spent in successful transmission
//   throughput_rate        throughput_normalized x rate constant (Mbps)
//   collision_prob         fraction of the link's transmissions that collide
struct LinkMetrics {
  std::vector<double> throughput_normalized;
  std::vector<double> throughput_rate;
  std::vector<double> collision_prob;

  std::size_t size() const { return throughput_normalized.size(); }
};

// Converts normalized airtime to Mbps; fitted to the benchmark tables rather
// than derived from a PHY model.
inline constexpr double kDefaultRateMbps = 7.229;

}  // namespace csma
