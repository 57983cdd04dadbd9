#include "csma/gicn.hpp"

#include <algorithm>
#include <cmath>

#include "csma/error.hpp"

namespace csma {

CollisionParams CollisionParams::from_window(int cw) {
  if (cw < 1) fail(ErrorCode::kInvalidArgument, "contention window must be >= 1");
  return CollisionParams(cw, 2.0 / (cw + 2.0));
}

CollisionParams CollisionParams::from_q1(double q1) {
  if (!(q1 >= 0.0 && q1 <= 2.0 / 3.0)) {
    fail(ErrorCode::kInvalidArgument, "q1 must lie in [0, 2/3]");
  }
  return CollisionParams(0, q1);
}

double conditional_collision_prob(const CollisionParams& params, std::size_t n) {
  if (n == 0) return 0.0;
  const double idle = params.cw() > 0 ? params.cw() / (params.cw() + 2.0) : 1.0 - params.q1();
  return 1.0 - std::pow(idle, static_cast<double>(n));
}

double linearized_collision_prob(const CollisionParams& params, std::size_t n) {
  return static_cast<double>(n) * params.q1();
}

std::size_t AugmentedSpace::index_of(LinkSet s) const {
  auto it = feasible_index_.find(s.bits());
  if (it == feasible_index_.end()) fail(ErrorCode::kInvalidArgument, "state is not feasible");
  return it->second;
}

std::vector<LinkSet> AugmentedSpace::collision_capable() const {
  std::vector<LinkSet> out;
  for (std::size_t k = feasible_count_; k < states_.size(); ++k) {
    if (out.empty() || out.back() != states_[k].base) out.push_back(states_[k].base);
  }
  return out;
}

AugmentedSpace build_augmented_space(const ContentionGraph& g, const CollisionParams& params,
                                     StateSpaceLimits limits) {
  AugmentedSpace space;
  space.link_count_ = g.size();
  space.q1_ = params.q1();

  const auto feasible = enumerate_feasible_states(g, limits);
  space.feasible_count_ = feasible.size();
  space.states_.reserve(feasible.size());
  for (std::size_t k = 0; k < feasible.size(); ++k) {
    space.states_.push_back(AugmentedState::feasible(feasible[k]));
    space.feasible_index_.emplace(feasible[k].bits(), k);
  }
  if (params.q1() == 0.0) return space;

  for (LinkSet s : feasible) {
    const LinkSet active = active_countdown_set(g, s);
    for (const LinkPair& e : countdown_edges(g, s)) {
      const std::size_t ni = countdown_neighbor_count(g, active, e.first);
      const std::size_t nj = countdown_neighbor_count(g, active, e.second);
      CollisionTerms t;
      t.collided = {conditional_collision_prob(params, ni) / static_cast<double>(ni),
                    conditional_collision_prob(params, nj) / static_cast<double>(nj)};
      t.rate = t.collided[0] + t.collided[1] - params.q1();
      if (!(t.rate > 0.0)) {
        fail(ErrorCode::kModelDomain,
             "collision rate for links " + g.link_id(e.first) + "," + g.link_id(e.second) +
                 " is not positive; the first-order collision model does not hold at this "
                 "contention window for this graph");
      }
      space.states_.push_back(AugmentedState::collision(s, e));
      space.terms_.push_back(t);
    }
  }
  return space;
}

double activation_weight(const ContentionGraph& g, LinkSet s, double rho,
                         const CollisionParams& params, std::span<const std::size_t> order) {
  double w = 1.0;
  LinkSet current;
  for (std::size_t i : order) {
    if (!s.contains(i) || current.contains(i)) continue;
    const LinkSet active = active_countdown_set(g, current);
    const std::size_t n = countdown_neighbor_count(g, active, i);
    w *= (1.0 - conditional_collision_prob(params, n)) * rho;
    current = current.with(i);
  }
  if (current != s) fail(ErrorCode::kInvalidArgument, "activation order does not cover the state");
  return w;
}

std::vector<double> gicn_weights(const ContentionGraph& g, const AugmentedSpace& space, double rho,
                                 const CollisionParams& params) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    fail(ErrorCode::kInvalidArgument, "access intensity must be finite and non-negative");
  }
  if (g.size() != space.link_count() || params.q1() != space.q1()) {
    fail(ErrorCode::kInvalidArgument, "augmented space was built for a different graph or window");
  }
  std::vector<double> w(space.size(), 0.0);
  for (std::size_t k = 0; k < space.feasible_count(); ++k) {
    const auto order = space.states()[k].base.indices();
    w[k] = activation_weight(g, space.states()[k].base, rho, params, order);
  }
  for (std::size_t k = space.feasible_count(); k < space.size(); ++k) {
    const double base = w[space.index_of(space.states()[k].base)];
    w[k] = base * rho * space.collision_terms(k).rate;
  }
  return w;
}

std::vector<double> gicn_weights(const ContentionGraph& g, const AugmentedSpace& space,
                                 const AccessIntensities& rho, const CollisionParams& params) {
  if (rho.size() != g.size()) fail(ErrorCode::kInvalidArgument, "need one access intensity per link");
  if (!rho.homogeneous()) {
    fail(ErrorCode::kUnsupported,
         "the collision model needs a single access intensity shared by all links");
  }
  return gicn_weights(g, space, rho[0], params);
}

StationaryDistribution gicn_distribution(const AugmentedSpace& space,
                                         const std::vector<double>& weights) {
  if (weights.size() != space.size()) fail(ErrorCode::kInvalidArgument, "weight vector size mismatch");
  StationaryDistribution dist;
  dist.link_count = space.link_count();
  dist.states = space.states();
  double z = 0.0;
  for (double w : weights) z += w;
  dist.partition_function = z;
  dist.probability.reserve(weights.size());
  for (double w : weights) dist.probability.push_back(w / z);
  return dist;
}

LinkMetrics metrics_from_probabilities(const ContentionGraph& g, const AugmentedSpace& space,
                                       const std::vector<double>& probability, double rate_constant) {
  if (probability.size() != space.size() || g.size() != space.link_count()) {
    fail(ErrorCode::kInvalidArgument, "probability vector does not match the augmented space");
  }
  const std::size_t n = g.size();
  std::vector<double> active(n, 0.0);
  std::vector<double> collided(n, 0.0);
  for (std::size_t k = 0; k < space.size(); ++k) {
    const AugmentedState& st = space.states()[k];
    for (std::size_t i : st.base.indices()) active[i] += probability[k];
    if (st.is_collision()) {
      const CollisionTerms& t = space.collision_terms(k);
      collided[st.pair.first] += probability[k] * t.collided[0] / t.rate;
      collided[st.pair.second] += probability[k] * t.collided[1] / t.rate;
    }
  }

  LinkMetrics m;
  m.throughput_normalized = active;
  m.throughput_rate.resize(n);
  m.collision_prob.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.throughput_rate[i] = active[i] * rate_constant;
    const double attempted = active[i] + collided[i];
    m.collision_prob[i] = attempted > 0.0 ? collided[i] / attempted : 0.0;
  }
  return m;
}

LinkMetrics gicn_metrics(const ContentionGraph& g, const AugmentedSpace& space,
                         const std::vector<double>& weights, double rate_constant) {
  return metrics_from_probabilities(g, space, gicn_distribution(space, weights).probability,
                                    rate_constant);
}

std::vector<CollisionStateMass> aggregate_collision_states(const AugmentedSpace& space,
                                                           const std::vector<double>& probability) {
  std::vector<CollisionStateMass> out;
  for (std::size_t k = space.feasible_count(); k < space.size(); ++k) {
    const LinkSet base = space.states()[k].base;
    if (out.empty() || out.back().base != base) out.push_back({base, 0.0});
    out.back().probability += probability.at(k);
  }
  return out;
}

}  // namespace csma
