#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "csma/graph.hpp"

namespace csma {

// Reference topologies, in benchmark-table order:
//   two-link  K2
//   triangle  K3
//   chain3    path 1-2-3
//   chain4    path 1-2-3-4
//   fig1      1-2 plus the triangle 2,3,4
//   star3     centre 1 adjacent to leaves 2,3,4
const std::vector<std::string>& builtin_topology_names();

// Throws Error(kInvalidArgument) for an unknown name.
ContentionGraph builtin_topology(std::string_view name);

}  // namespace csma
