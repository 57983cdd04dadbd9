#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>

#include "csma/gicn.hpp"
#include "csma/state_space.hpp"

namespace csma {

inline constexpr std::size_t kMaxCtmcStates = 20000;

/// Generator of the collision-augmented chain with mu = 1 (time measured in
/// mean transmission durations) and lambda = rho. Off-diagonal entries are
/// transition rates; the diagonal holds the negated row sums.
class RateMatrix {
 public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  RateMatrix(std::vector<AugmentedState> states, Sparse generator);

  std::size_t dimension() const { return states_.size(); }
  const std::vector<AugmentedState>& states() const { return states_; }
  const Sparse& generator() const { return q_; }

  double rate(std::size_t from, std::size_t to) const;  // off-diagonal only
  double exit_rate(std::size_t from) const { return -q_.coeff(from, from); }
  std::size_t transition_count(std::size_t from) const;
  double max_row_sum() const;  // |sum of row| maximised over rows

 private:
  std::vector<AugmentedState> states_;
  Sparse q_;
};

// Transitions, with n_i(s) the countdown neighbours of i in s:
//   s -> s+{i}   (1 - q_{n_i(s)}) lambda   for each countdown link i
//   s+{i} -> s   mu
//   s -> (s,e)   rate(s,e) lambda         for each countdown edge e
//   (s,e) -> s   mu
// Throws Error(kLimitExceeded) above kMaxCtmcStates.
RateMatrix build_rate_matrix(const ContentionGraph& g, const AugmentedSpace& space, double rho,
                             const CollisionParams& params);

// Solves pi Q = 0, sum(pi) = 1 by sparse LU with one balance equation
// replaced by normalization. Throws Error(kNumeric) if the factorization
// fails or the balance residual exceeds 1e-10 (scaled by the largest rate).
StationaryDistribution solve_stationary(const RateMatrix& m, std::size_t link_count);

// max_j |(pi Q)_j|
double balance_residual(const RateMatrix& m, const std::vector<double>& pi);

// Same aggregation rules as gicn_metrics.
LinkMetrics ctmc_metrics(const ContentionGraph& g, const AugmentedSpace& space,
                         const StationaryDistribution& dist, double rate_constant = kDefaultRateMbps);

}  // namespace csma
