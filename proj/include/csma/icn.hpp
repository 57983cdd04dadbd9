#pragma once

#include <cstddef>
#include <vector>

#include "csma/graph.hpp"
#include "csma/state_space.hpp"

namespace csma {

/// Per-link access intensity rho_i = E[t_r] / E[t_cd]; every entry > 0.
class AccessIntensities {
 public:
  explicit AccessIntensities(std::vector<double> rho);
  static AccessIntensities uniform(std::size_t links, double rho);

  std::size_t size() const { return rho_.size(); }
  double operator[](std::size_t i) const { return rho_[i]; }
  const std::vector<double>& values() const { return rho_; }
  bool homogeneous() const;

 private:
  std::vector<double> rho_;
};

// Collision-free product form: P_s proportional to the product of rho_i over
// the links of s, over all independent sets s.
StationaryDistribution icn_distribution(const ContentionGraph& g, const AccessIntensities& rho,
                                        StateSpaceLimits limits = {});

// th_i = total probability of the states in which link i transmits.
std::vector<double> icn_throughput(const StationaryDistribution& dist);

}  // namespace csma
