#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "csma/graph.hpp"
#include "csma/icn.hpp"
#include "csma/metrics.hpp"
#include "csma/state_space.hpp"

namespace csma {

/// Contention window and the derived per-slot start probability
/// q1 = 2 / (cw + 2) of a link that is actively counting down.
class CollisionParams {
 public:
  // cw >= 1.
  static CollisionParams from_window(int cw);
  // 0 <= q1 <= 2/3. q1 == 0 is the collision-free limit (cw -> infinity).
  static CollisionParams from_q1(double q1);
  static CollisionParams collision_free() { return from_q1(0.0); }

  int cw() const { return cw_; }  // 0 when built from q1
  double q1() const { return q1_; }

 private:
  CollisionParams(int cw, double q1) : cw_(cw), q1_(q1) {}
  int cw_;
  double q1_;
};

// Probability that a starting link collides given n countdown neighbours:
// 1 - (cw / (cw + 2))^n.
double conditional_collision_prob(const CollisionParams& params, std::size_t n);

// First-order form n * q1.
double linearized_collision_prob(const CollisionParams& params, std::size_t n);

// Per collision state (s, {i, j}), in units of the backoff rate lambda:
//   rate     = q_{n_i}/n_i + q_{n_j}/n_j - q1   (transition s -> (s, e))
//   collided = {q_{n_i}/n_i, q_{n_j}/n_j}       (link-attributed shares)
// Summed over the countdown edges of s the rates give the aggregate
// sum_i q_{n_i} - |E(s)| q1, and the shares give q_{n_i} for each link.
struct CollisionTerms {
  double rate = 0.0;
  std::array<double, 2> collided{};
};

/// Feasible states in canonical order followed by one collision state per
/// (feasible state, countdown edge) pair.
class AugmentedSpace {
 public:
  std::size_t link_count() const { return link_count_; }
  double q1() const { return q1_; }
  const std::vector<AugmentedState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  std::size_t feasible_count() const { return feasible_count_; }

  // Index of a feasible state; throws Error(kInvalidArgument) if absent.
  std::size_t index_of(LinkSet s) const;
  // Only valid for collision-state indices.
  const CollisionTerms& collision_terms(std::size_t state_index) const {
    return terms_.at(state_index - feasible_count_);
  }
  // The feasible states from which a collision can occur.
  std::vector<LinkSet> collision_capable() const;

 private:
  friend AugmentedSpace build_augmented_space(const ContentionGraph&, const CollisionParams&,
                                              StateSpaceLimits);
  std::size_t link_count_ = 0;
  double q1_ = 0.0;
  std::size_t feasible_count_ = 0;
  std::vector<AugmentedState> states_;
  std::vector<CollisionTerms> terms_;
  std::unordered_map<std::uint64_t, std::size_t> feasible_index_;
};

// Throws Error(kLimitExceeded) past the link cap and Error(kModelDomain) if a
// collision rate is not positive (q1 too large for the graph's density).
// With q1 == 0 no collision states are produced.
AugmentedSpace build_augmented_space(const ContentionGraph& g, const CollisionParams& params,
                                     StateSpaceLimits limits = {});

// Product-form weight of feasible s built by activating its links in `order`
// from the empty state; each activation of link i out of s' contributes
// (1 - q_n) rho with n = countdown neighbours of i in s'.
double activation_weight(const ContentionGraph& g, LinkSet s, double rho,
                         const CollisionParams& params, std::span<const std::size_t> order);

// Unnormalized weights aligned with space.states(): w(empty) = 1, feasible
// states use increasing-index activation order, collision states
// w(s, e) = w(s) * rho * rate(s, e). rho == 0 is accepted (all mass on empty).
std::vector<double> gicn_weights(const ContentionGraph& g, const AugmentedSpace& space, double rho,
                                 const CollisionParams& params);
// Heterogeneous intensities are not defined for the collision model; throws
// Error(kUnsupported) unless all entries are equal.
std::vector<double> gicn_weights(const ContentionGraph& g, const AugmentedSpace& space,
                                 const AccessIntensities& rho, const CollisionParams& params);

StationaryDistribution gicn_distribution(const AugmentedSpace& space,
                                         const std::vector<double>& weights);

// Throughput counts feasible states containing i and collision states whose
// base contains i. The collision probability is collided / (collided + that).
LinkMetrics gicn_metrics(const ContentionGraph& g, const AugmentedSpace& space,
                         const std::vector<double>& weights, double rate_constant = kDefaultRateMbps);

// Same aggregation over normalized probabilities aligned with space.states().
LinkMetrics metrics_from_probabilities(const ContentionGraph& g, const AugmentedSpace& space,
                                       const std::vector<double>& probability,
                                       double rate_constant = kDefaultRateMbps);

struct CollisionStateMass {
  LinkSet base;
  double probability = 0.0;
};
// Per-edge collision states folded into one aggregate per base state (for reports).
std::vector<CollisionStateMass> aggregate_collision_states(const AugmentedSpace& space,
                                                           const std::vector<double>& probability);

}  // namespace csma
