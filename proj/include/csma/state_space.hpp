#pragma once

#include <cstddef>
#include <vector>

#include "csma/graph.hpp"

namespace csma {

enum class StateKind { kFeasible, kCollision };

/// A state of the collision-augmented chain. Feasible states are independent
/// sets; a collision state is the pair of countdown neighbours that started in
/// the same slot out of feasible state `base` (links of `base` keep
/// transmitting undisturbed).
struct AugmentedState {
  StateKind kind = StateKind::kFeasible;
  LinkSet base;
  LinkPair pair;  // meaningful for collision states only

  static AugmentedState feasible(LinkSet s) { return {StateKind::kFeasible, s, {}}; }
  static AugmentedState collision(LinkSet s, LinkPair e) { return {StateKind::kCollision, s, e}; }

  bool is_collision() const { return kind == StateKind::kCollision; }
  friend bool operator==(const AugmentedState&, const AugmentedState&) = default;
};

struct StationaryDistribution {
  std::size_t link_count = 0;
  std::vector<AugmentedState> states;
  std::vector<double> probability;
  double partition_function = 1.0;
};

}  // namespace csma
