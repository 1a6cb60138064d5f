#pragma once

#include <cstdint>
#include <vector>

#include "rapid/graph.hpp"

namespace rapid {
namespace part {

// Multilevel k-way partitioning: heavy-edge-matching coarsening, greedy
// region-growing initial partition, boundary FM refinement. Deterministic
// given the input; ties break toward the lowest vertex id. Every part holds
// at most imbalance * ceil(n/k) vertices.
std::vector<std::uint32_t> partition_kway(const Graph& g, std::uint32_t k,
                                          double imbalance = 1.10);

// Vertices of `part` with at least one in- or out-edge whose other endpoint
// lies in a different part. Sorted ascending.
std::vector<Vertex> find_boundary(const Graph& g, const std::vector<std::uint32_t>& assignment,
                                  std::uint32_t part);

// Total weight of edges whose endpoints lie in different parts.
std::uint64_t edge_cut(const Graph& g, const std::vector<std::uint32_t>& assignment);

} // namespace part
} // namespace rapid
