#include "csma/graph.hpp"

#include <algorithm>
#include <unordered_set>

#include "csma/error.hpp"

namespace csma {

std::vector<std::size_t> LinkSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
  }
  return out;
}

ContentionGraph::ContentionGraph(std::vector<std::string> link_ids,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : ids_(std::move(link_ids)) {
  if (ids_.empty()) fail(ErrorCode::kInvalidArgument, "contention graph has no links");
  if (ids_.size() > kHardMaxLinks) {
    fail(ErrorCode::kLimitExceeded, "contention graph has " + std::to_string(ids_.size()) +
                                        " links; at most " + std::to_string(kHardMaxLinks) +
                                        " are supported");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids_) {
    if (id.empty()) fail(ErrorCode::kInvalidArgument, "empty link id");
    if (!seen.insert(id).second) fail(ErrorCode::kInvalidArgument, "duplicate link id '" + id + "'");
  }

  neighbors_.assign(ids_.size(), LinkSet{});
  for (auto [a, b] : edges) {
    if (a >= ids_.size() || b >= ids_.size()) {
      fail(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
    if (a == b) fail(ErrorCode::kInvalidArgument, "self-loop on link '" + ids_[a] + "'");
    if (neighbors_[a].contains(b)) continue;
    neighbors_[a] = neighbors_[a].with(b);
    neighbors_[b] = neighbors_[b].with(a);
    edges_.push_back(LinkPair::of(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
}

std::optional<std::size_t> ContentionGraph::index_of(std::string_view id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

bool ContentionGraph::is_independent(LinkSet s) const {
  if ((s - all_links()).bits() != 0) return false;
  for (std::size_t i : s.indices()) {
    if (neighbors_[i].intersects(s)) return false;
  }
  return true;
}

namespace {

void extend_independent(const ContentionGraph& g, std::size_t next, LinkSet current,
                        LinkSet excluded, std::vector<LinkSet>& out) {
  if (next == g.size()) {
    out.push_back(current);
    return;
  }
  extend_independent(g, next + 1, current, excluded, out);
  if (!excluded.contains(next)) {
    extend_independent(g, next + 1, current.with(next), excluded | g.neighbors(next), out);
  }
}

void require_independent(const ContentionGraph& g, LinkSet s) {
  if (!g.is_independent(s)) {
    fail(ErrorCode::kInvalidArgument, "state is not an independent set of the contention graph");
  }
}

}  // namespace

std::vector<LinkSet> enumerate_feasible_states(const ContentionGraph& g, StateSpaceLimits limits) {
  if (g.size() > limits.max_links) {
    fail(ErrorCode::kLimitExceeded,
         "graph has " + std::to_string(g.size()) + " links; state-space limit is " +
             std::to_string(limits.max_links) + " (computing the partition function is NP-hard)");
  }
  std::vector<LinkSet> states;
  extend_independent(g, 0, LinkSet{}, LinkSet{}, states);
  std::sort(states.begin(), states.end(), canonical_less);
  return states;
}

LinkSet active_countdown_set(const ContentionGraph& g, LinkSet s) {
  require_independent(g, s);
  LinkSet active;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!s.contains(i) && !g.neighbors(i).intersects(s)) active = active.with(i);
  }
  return active;
}

std::vector<LinkPair> countdown_edges(const ContentionGraph& g, LinkSet s) {
  const LinkSet active = active_countdown_set(g, s);
  std::vector<LinkPair> out;
  for (const auto& e : g.edges()) {
    if (active.contains(e.first) && active.contains(e.second)) out.push_back(e);
  }
  return out;
}

}  // namespace csma
