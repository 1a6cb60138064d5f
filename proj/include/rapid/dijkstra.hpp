#pragma once

#include <vector>

#include "rapid/graph.hpp"

namespace rapid {

// Single-source shortest distances over the CSR graph, binary-heap Dijkstra.
// Saturates exactly like the matrix kernels: a path whose length reaches the
// sentinel is treated as unreachable.
std::vector<Distance> dijkstra(const Graph& g, Vertex source);

} // namespace rapid
