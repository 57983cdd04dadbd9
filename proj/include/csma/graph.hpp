#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csma {

// Links beyond this many make the independent-set space (up to 2^N states)
// impractical; callers may raise the cap up to kHardMaxLinks.
inline constexpr std::size_t kDefaultMaxLinks = 25;
inline constexpr std::size_t kHardMaxLinks = 64;

/// Fixed-width set of link indices. Doubles as the system state s = s_1..s_N,
/// with size() the number of transmitting links.
class LinkSet {
 public:
  constexpr LinkSet() = default;
  constexpr explicit LinkSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr LinkSet single(std::size_t i) { return LinkSet(std::uint64_t{1} << i); }
  static constexpr LinkSet first_n(std::size_t n) {
    return LinkSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
  constexpr LinkSet with(std::size_t i) const { return LinkSet(bits_ | (std::uint64_t{1} << i)); }
  constexpr LinkSet without(std::size_t i) const { return LinkSet(bits_ & ~(std::uint64_t{1} << i)); }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool intersects(LinkSet other) const { return (bits_ & other.bits_) != 0; }

  std::vector<std::size_t> indices() const;

  friend constexpr LinkSet operator|(LinkSet a, LinkSet b) { return LinkSet(a.bits_ | b.bits_); }
  friend constexpr LinkSet operator&(LinkSet a, LinkSet b) { return LinkSet(a.bits_ & b.bits_); }
  friend constexpr LinkSet operator-(LinkSet a, LinkSet b) { return LinkSet(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(LinkSet, LinkSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

// Canonical state order: population count, then bit pattern.
constexpr bool canonical_less(LinkSet a, LinkSet b) {
  return a.size() != b.size() ? a.size() < b.size() : a.bits() < b.bits();
}

/// Unordered link pair stored with first < second.
struct LinkPair {
  std::size_t first = 0;
  std::size_t second = 0;

  static LinkPair of(std::size_t a, std::size_t b) {
    return a < b ? LinkPair{a, b} : LinkPair{b, a};
  }
  bool contains(std::size_t i) const { return first == i || second == i; }
  friend auto operator<=>(const LinkPair&, const LinkPair&) = default;
};

/// Contention graph G = (V, E): vertices are links, an edge joins two links
/// whose transmitters carrier-sense each other. Immutable once built.
class ContentionGraph {
 public:
  // Throws Error(kInvalidArgument) on empty/duplicate ids, self-loops or
  // out-of-range endpoints. Duplicate edges collapse to one.
  ContentionGraph(std::vector<std::string> link_ids,
                  const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& link_ids() const { return ids_; }
  const std::string& link_id(std::size_t i) const { return ids_.at(i); }
  std::optional<std::size_t> index_of(std::string_view id) const;

  bool adjacent(std::size_t i, std::size_t j) const { return neighbors_.at(i).contains(j); }
  LinkSet neighbors(std::size_t i) const { return neighbors_.at(i); }
  std::size_t degree(std::size_t i) const { return neighbors_.at(i).size(); }
  const std::vector<LinkPair>& edges() const { return edges_; }
  LinkSet all_links() const { return LinkSet::first_n(size()); }

  bool is_independent(LinkSet s) const;

  friend bool operator==(const ContentionGraph& a, const ContentionGraph& b) {
    return a.ids_ == b.ids_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<LinkSet> neighbors_;
  std::vector<LinkPair> edges_;  // sorted lexicographically
};

struct StateSpaceLimits {
  std::size_t max_links = kDefaultMaxLinks;
};

// Parses the line format (`links: ...` / `edge: a b`) or the JSON form
// {"links": [...], "edges": [[a, b], ...]}; the first non-comment character
// decides which. Throws Error(kParse) with a line number where possible.
ContentionGraph parse_graph(std::string_view text);
ContentionGraph load_graph_file(const std::filesystem::path& path);

// Every independent set of g exactly once, in canonical order (empty set
// first). Throws Error(kLimitExceeded) when g.size() > limits.max_links.
std::vector<LinkSet> enumerate_feasible_states(const ContentionGraph& g,
                                               StateSpaceLimits limits = {});

// Links that are idle and hear no active neighbour in state s.
LinkSet active_countdown_set(const ContentionGraph& g, LinkSet s);

// Edges of g with both endpoints counting down in s, lexicographic order.
std::vector<LinkPair> countdown_edges(const ContentionGraph& g, LinkSet s);

// Number of countdown neighbours of link i, i.e. |N(i) ∩ active|.
inline std::size_t countdown_neighbor_count(const ContentionGraph& g, LinkSet active,
                                            std::size_t i) {
  return (g.neighbors(i) & active).size();
}

}  // namespace csma
