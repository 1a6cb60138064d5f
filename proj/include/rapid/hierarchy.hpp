#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rapid/distance.hpp"
#include "rapid/graph.hpp"

namespace rapid {
namespace part {

// One partition component. `vertices` are ids of the level's graph,
// boundary-first: the leading boundary_count entries are exactly the
// vertices with an edge into another component at the same level; each zone
// is sorted ascending.
struct Component {
    std::uint32_t level = 0;
    std::uint32_t index = 0;
    std::vector<Vertex> vertices;
    std::uint32_t boundary_count = 0;
};

// Reduced graph over all boundary vertices of one level: cross-component
// edges plus virtual intra-component shortcut edges, parallel candidates
// collapsed to minimum. Vertex b corresponds to origin[b] = (component,
// position) and parent_ids[b] in the level's graph.
struct BoundaryGraph {
    std::uint32_t level = 0;
    Graph graph;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> origin;
    std::vector<Vertex> parent_ids;
};

struct HierarchyLevel {
    std::vector<Component> components;
    std::vector<std::uint32_t> assignment;  // level-local vertex -> component
    std::vector<std::uint32_t> position;    // level-local vertex -> index into its component
    BoundaryGraph boundary;
    std::vector<std::uint64_t> bg_offset;   // component -> first boundary-graph id (size k+1)
    std::vector<Vertex> to_original;        // level-local vertex -> original vertex id

    // Closure of each component's dense block, cached from construction (the
    // virtual boundary edges need it); the solver starts Step 1 from these.
    std::vector<DistanceMatrix> intra;
    std::vector<std::uint64_t> intra_updates;
    std::vector<std::uint64_t> induced_edges; // per-component subgraph edge count

    std::size_t num_components() const { return components.size(); }
};

// Recursion skeleton: level 0 partitions the input graph; level l+1
// partitions level l's boundary graph. Recursion stops when a boundary graph
// fits the tile limit, or stalls when it stops shrinking (dense graphs can
// be all-boundary at every level; the top graph is then oversized and is
// closed in one piece).
struct PartitionHierarchy {
    std::uint32_t n = 0;
    std::uint32_t tile_limit = 0;
    bool stalled = false;
    std::vector<HierarchyLevel> levels;

    const Graph& level_graph(std::size_t level, const Graph& g0) const {
        return level == 0 ? g0 : levels[level - 1].boundary.graph;
    }
    const BoundaryGraph& top_boundary() const { return levels.back().boundary; }
};

// Boundary graph of one level from its components and their FW-closed intra
// matrices: (a) cross-component edges of g between boundary vertices, (b) a
// virtual edge for every ordered boundary pair with finite intra distance.
BoundaryGraph build_boundary_graph(const Graph& g, const std::vector<Component>& components,
                                   const std::vector<DistanceMatrix>& intra);

struct HierarchyOptions {
    double imbalance = 1.10;
    std::uint32_t max_levels = 64;
    // Pre-computed level-0 assignment (e.g. imported from METIS); oversize
    // parts are still re-split to the tile limit.
    std::optional<std::vector<std::uint32_t>> level0_assignment;
};

PartitionHierarchy build_hierarchy(const Graph& g, std::uint32_t tile_limit,
                                   const HierarchyOptions& opts = {});

} // namespace part
} // namespace rapid
