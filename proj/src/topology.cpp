#include "csma/topology.hpp"

#include "csma/error.hpp"

namespace csma {
namespace {

ContentionGraph numbered(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
  std::vector<std::string> ids;
  for (std::size_t i = 1; i <= n; ++i) ids.push_back("L" + std::to_string(i));
  return ContentionGraph(std::move(ids), edges);
}

}  // namespace

const std::vector<std::string>& builtin_topology_names() {
  static const std::vector<std::string> names = {"two-link", "triangle", "chain3",
                                                 "chain4",   "fig1",     "star3"};
  return names;
}

ContentionGraph builtin_topology(std::string_view name) {
  if (name == "two-link") return numbered(2, {{0, 1}});
  if (name == "triangle") return numbered(3, {{0, 1}, {1, 2}, {0, 2}});
  if (name == "chain3") return numbered(3, {{0, 1}, {1, 2}});
  if (name == "chain4") return numbered(4, {{0, 1}, {1, 2}, {2, 3}});
  if (name == "fig1") return numbered(4, {{0, 1}, {1, 2}, {1, 3}, {2, 3}});
  if (name == "star3") return numbered(4, {{0, 1}, {0, 2}, {0, 3}});
  fail(ErrorCode::kInvalidArgument, "unknown topology '" + std::string(name) + "'");
}

}  // namespace csma
