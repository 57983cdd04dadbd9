#include "csma/ctmc.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

#include "csma/error.hpp"

namespace csma {

RateMatrix::RateMatrix(std::vector<AugmentedState> states, Sparse generator)
    : states_(std::move(states)), q_(std::move(generator)) {
  q_.makeCompressed();
}

double RateMatrix::rate(std::size_t from, std::size_t to) const {
  return from == to ? 0.0 : q_.coeff(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to));
}

std::size_t RateMatrix::transition_count(std::size_t from) const {
  std::size_t count = 0;
  for (Sparse::InnerIterator it(q_, static_cast<Eigen::Index>(from)); it; ++it) {
    if (static_cast<std::size_t>(it.col()) != from && it.value() > 0.0) ++count;
  }
  return count;
}

double RateMatrix::max_row_sum() const {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < q_.outerSize(); ++r) {
    double sum = 0.0;
    for (Sparse::InnerIterator it(q_, r); it; ++it) sum += it.value();
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

RateMatrix build_rate_matrix(const ContentionGraph& g, const AugmentedSpace& space, double rho,
                             const CollisionParams& params) {
  if (g.size() != space.link_count() || params.q1() != space.q1()) {
    fail(ErrorCode::kInvalidArgument, "augmented space was built for a different graph or window");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    fail(ErrorCode::kInvalidArgument, "access intensity must be finite and non-negative");
  }
  if (space.size() > kMaxCtmcStates) {
    fail(ErrorCode::kLimitExceeded, "augmented chain has " + std::to_string(space.size()) +
                                        " states; the exact solver accepts at most " +
                                        std::to_string(kMaxCtmcStates));
  }

  constexpr double mu = 1.0;
  const double lambda = rho;
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> exit(space.size(), 0.0);
  auto add = [&](std::size_t from, std::size_t to, double r) {
    if (r <= 0.0) return;
    entries.emplace_back(static_cast<int>(from), static_cast<int>(to), r);
    exit[from] += r;
  };

  for (std::size_t k = 0; k < space.feasible_count(); ++k) {
    const LinkSet s = space.states()[k].base;
    const LinkSet active = active_countdown_set(g, s);
    for (std::size_t i : active.indices()) {
      const std::size_t n = countdown_neighbor_count(g, active, i);
      add(k, space.index_of(s.with(i)), (1.0 - conditional_collision_prob(params, n)) * lambda);
    }
    for (std::size_t i : s.indices()) add(k, space.index_of(s.without(i)), mu);
  }
  for (std::size_t k = space.feasible_count(); k < space.size(); ++k) {
    const std::size_t base = space.index_of(space.states()[k].base);
    add(base, k, space.collision_terms(k).rate * lambda);
    add(k, base, mu);
  }
  for (std::size_t k = 0; k < space.size(); ++k) {
    entries.emplace_back(static_cast<int>(k), static_cast<int>(k), -exit[k]);
  }

  const auto dim = static_cast<Eigen::Index>(space.size());
  RateMatrix::Sparse q(dim, dim);
  q.setFromTriplets(entries.begin(), entries.end());
  return RateMatrix(space.states(), std::move(q));
}

double balance_residual(const RateMatrix& m, const std::vector<double>& pi) {
  const Eigen::Map<const Eigen::VectorXd> p(pi.data(), static_cast<Eigen::Index>(pi.size()));
  const Eigen::VectorXd flow = m.generator().transpose() * p;
  return flow.cwiseAbs().maxCoeff();
}

StationaryDistribution solve_stationary(const RateMatrix& m, std::size_t link_count) {
  const auto dim = static_cast<Eigen::Index>(m.dimension());
  StationaryDistribution dist;
  dist.link_count = link_count;
  dist.states = m.states();

  // A chain without transitions (rho = 0) sits in the empty state.
  if (dim == 1 || m.generator().coeff(0, 0) == 0.0) {
    dist.probability.assign(m.dimension(), 0.0);
    dist.probability[0] = 1.0;
    return dist;
  }

  // Rows of Q^T are the balance equations; the last one becomes sum(pi) = 1.
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(m.generator().nonZeros() + dim));
  const auto& q = m.generator();
  for (Eigen::Index r = 0; r < q.outerSize(); ++r) {
    for (RateMatrix::Sparse::InnerIterator it(q, r); it; ++it) {
      if (it.col() != dim - 1) entries.emplace_back(it.col(), r, it.value());
    }
  }
  for (Eigen::Index c = 0; c < dim; ++c) entries.emplace_back(dim - 1, c, 1.0);

  Eigen::SparseMatrix<double> a(dim, dim);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs(dim - 1) = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) {
    fail(ErrorCode::kNumeric, "balance equations are singular (chain not irreducible?)");
  }
  const Eigen::VectorXd pi = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !pi.allFinite()) {
    fail(ErrorCode::kNumeric, "stationary solve failed");
  }

  dist.probability.assign(pi.data(), pi.data() + dim);
  // Product-form normalization fixes w(empty) = 1, so Z = 1 / pi(empty).
  dist.partition_function = 1.0 / dist.probability[0];
  double max_rate = 1.0;
  for (Eigen::Index k = 0; k < dim; ++k) max_rate = std::max(max_rate, -q.coeff(k, k));
  const double residual = balance_residual(m, dist.probability);
  if (residual > 1e-10 * max_rate) {
    fail(ErrorCode::kNumeric, "global balance residual " + std::to_string(residual) + " too large");
  }
  return dist;
}

LinkMetrics ctmc_metrics(const ContentionGraph& g, const AugmentedSpace& space,
                         const StationaryDistribution& dist, double rate_constant) {
  return metrics_from_probabilities(g, space, dist.probability, rate_constant);
}

}  // namespace csma
