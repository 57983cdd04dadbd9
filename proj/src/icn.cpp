#include "csma/icn.hpp"

#include <algorithm>
#include <cmath>

#include "csma/error.hpp"

namespace csma {

AccessIntensities::AccessIntensities(std::vector<double> rho) : rho_(std::move(rho)) {
  for (double r : rho_) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      fail(ErrorCode::kInvalidArgument, "access intensities must be positive and finite");
    }
  }
}

AccessIntensities AccessIntensities::uniform(std::size_t links, double rho) {
  return AccessIntensities(std::vector<double>(links, rho));
}

bool AccessIntensities::homogeneous() const {
  return std::adjacent_find(rho_.begin(), rho_.end(), std::not_equal_to<>()) == rho_.end();
}

StationaryDistribution icn_distribution(const ContentionGraph& g, const AccessIntensities& rho,
                                        StateSpaceLimits limits) {
  if (rho.size() != g.size()) {
    fail(ErrorCode::kInvalidArgument, "need one access intensity per link");
  }
  const auto feasible = enumerate_feasible_states(g, limits);

  StationaryDistribution dist;
  dist.link_count = g.size();
  dist.states.reserve(feasible.size());
  dist.probability.reserve(feasible.size());
  double z = 0.0;
  // Canonical order sums small populations first.
  for (LinkSet s : feasible) {
    double w = 1.0;
    for (std::size_t i : s.indices()) w *= rho[i];
    dist.states.push_back(AugmentedState::feasible(s));
    dist.probability.push_back(w);
    z += w;
  }
  for (double& p : dist.probability) p /= z;
  dist.partition_function = z;
  return dist;
}

std::vector<double> icn_throughput(const StationaryDistribution& dist) {
  std::vector<double> th(dist.link_count, 0.0);
  for (std::size_t k = 0; k < dist.states.size(); ++k) {
    for (std::size_t i : dist.states[k].base.indices()) th[i] += dist.probability[k];
  }
  return th;
}

}  // namespace csma
