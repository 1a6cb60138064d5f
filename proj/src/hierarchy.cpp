#include "rapid/hierarchy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "rapid/kernels.hpp"
#include "rapid/partition.hpp"

namespace rapid {
namespace part {

namespace {

// Splits any part larger than tile_limit by recursively partitioning its
// induced subgraph; part ids are compacted afterwards.
std::vector<std::uint32_t> split_oversize(const Graph& g, std::vector<std::uint32_t> assignment,
                                          std::uint32_t tile_limit, double imbalance) {
    for (;;) {
        std::uint32_t nparts = 0;
        for (auto p : assignment) nparts = std::max(nparts, p + 1);
        std::vector<std::uint32_t> size(nparts, 0);
        for (auto p : assignment) size[p]++;

        std::uint32_t oversize = 0xFFFFFFFFu;
        for (std::uint32_t p = 0; p < nparts; ++p)
            if (size[p] > tile_limit) {
                oversize = p;
                break;
            }
        if (oversize == 0xFFFFFFFFu) break;

        std::vector<Vertex> members;
        for (Vertex u = 0; u < g.num_vertices(); ++u)
            if (assignment[u] == oversize) members.push_back(u);

        // Induced subgraph in member order.
        std::vector<std::uint32_t> local(g.num_vertices(), 0xFFFFFFFFu);
        for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = std::uint32_t(i);
        std::vector<EdgeTriple> edges;
        for (Vertex u : members) {
            auto cols = g.neighbors(u);
            auto ws = g.weights(u);
            for (std::size_t e = 0; e < cols.size(); ++e)
                if (local[cols[e]] != 0xFFFFFFFFu)
                    edges.push_back({local[u], local[cols[e]], ws[e]});
        }
        Graph sub = Graph::from_edges(Vertex(members.size()), std::move(edges));
        const std::uint32_t sub_k =
            std::uint32_t((members.size() + tile_limit - 1) / tile_limit);
        std::vector<std::uint32_t> sub_assign =
            partition_kway(sub, std::max(2u, sub_k), imbalance);
        // Sub-part 0 keeps the old id; the rest append.
        for (std::size_t i = 0; i < members.size(); ++i)
            if (sub_assign[i] != 0) assignment[members[i]] = nparts + sub_assign[i] - 1;
    }

    // Compact away empty part ids, preserving order.
    std::uint32_t nparts = 0;
    for (auto p : assignment) nparts = std::max(nparts, p + 1);
    std::vector<std::uint32_t> size(nparts, 0);
    for (auto p : assignment) size[p]++;
    std::vector<std::uint32_t> remap(nparts, 0);
    std::uint32_t next = 0;
    for (std::uint32_t p = 0; p < nparts; ++p) remap[p] = size[p] ? next++ : 0;
    for (auto& p : assignment) p = remap[p];
    return assignment;
}

} // namespace

BoundaryGraph build_boundary_graph(const Graph& g, const std::vector<Component>& components,
                                   const std::vector<DistanceMatrix>& intra) {
    if (intra.size() != components.size())
        throw std::invalid_argument("build_boundary_graph: one intra matrix per component required");
    for (std::size_t c = 0; c < components.size(); ++c)
        if (intra[c].rows() != components[c].vertices.size() ||
            intra[c].cols() != components[c].vertices.size())
            throw std::invalid_argument("build_boundary_graph: intra matrix size mismatch");

    BoundaryGraph bg;
    bg.level = components.empty() ? 0 : components.front().level;

    // Boundary ids: component blocks concatenated in component order.
    std::vector<std::uint32_t> bg_id(g.num_vertices(), 0xFFFFFFFFu);
    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& comp = components[c];
        for (std::uint32_t a = 0; a < comp.boundary_count; ++a) {
            bg_id[comp.vertices[a]] = std::uint32_t(bg.parent_ids.size());
            bg.origin.emplace_back(std::uint32_t(c), a);
            bg.parent_ids.push_back(comp.vertices[a]);
        }
    }

    std::vector<EdgeTriple> edges;
    // (a) Cross-component edges; both endpoints are boundary by definition.
    std::vector<std::uint32_t> owner(g.num_vertices(), 0xFFFFFFFFu);
    for (std::size_t c = 0; c < components.size(); ++c)
        for (Vertex v : components[c].vertices) owner[v] = std::uint32_t(c);
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
        auto cols = g.neighbors(u);
        auto ws = g.weights(u);
        for (std::size_t e = 0; e < cols.size(); ++e) {
            if (owner[u] == owner[cols[e]]) continue;
            if (bg_id[u] == 0xFFFFFFFFu || bg_id[cols[e]] == 0xFFFFFFFFu)
                throw std::logic_error("cross edge endpoint missing from boundary set");
            edges.push_back({bg_id[u], bg_id[cols[e]], ws[e]});
        }
    }
    // (b) Virtual edges: every ordered boundary pair with finite intra
    // distance, including pairs that also carry a direct edge (min-collapse
    // resolves).
    std::uint64_t base = 0;
    for (std::size_t c = 0; c < components.size(); ++c) {
        const std::uint32_t bc = components[c].boundary_count;
        for (std::uint32_t a = 0; a < bc; ++a)
            for (std::uint32_t b = 0; b < bc; ++b) {
                if (a == b) continue;
                const Distance w = intra[c](a, b);
                if (w != kInf)
                    edges.push_back({Vertex(base + a), Vertex(base + b), w});
            }
        base += bc;
    }
    bg.graph = Graph::from_edges(Vertex(bg.parent_ids.size()), std::move(edges));
    return bg;
}

PartitionHierarchy build_hierarchy(const Graph& g, std::uint32_t tile_limit,
                                   const HierarchyOptions& opts) {
    if (tile_limit < 2) throw std::invalid_argument("build_hierarchy: tile_limit must be >= 2");

    PartitionHierarchy h;
    h.n = g.num_vertices();
    h.tile_limit = tile_limit;
    if (h.n == 0) {
        h.levels.emplace_back(); // empty level: no components, empty boundary
        return h;
    }
    // `cur` points into h.levels between iterations; no reallocation allowed.
    h.levels.reserve(opts.max_levels);

    const Graph* cur = &g;
    std::vector<Vertex> to_original(g.num_vertices());
    std::iota(to_original.begin(), to_original.end(), 0);

    for (std::uint32_t level = 0;; ++level) {
        const Graph& graph = *cur;
        const Vertex n = graph.num_vertices();

        HierarchyLevel lvl;
        lvl.to_original = to_original;

        const std::uint32_t k = std::uint32_t((std::uint64_t(n) + tile_limit - 1) / tile_limit);
        std::vector<std::uint32_t> assignment;
        if (level == 0 && opts.level0_assignment) {
            assignment = *opts.level0_assignment;
            if (assignment.size() != n)
                throw std::invalid_argument("imported assignment does not cover all vertices");
        } else {
            assignment = partition_kway(graph, std::max(1u, k), opts.imbalance);
        }
        assignment = split_oversize(graph, std::move(assignment), tile_limit, opts.imbalance);
        lvl.assignment = assignment;

        std::uint32_t nparts = 0;
        for (auto p : assignment) nparts = std::max(nparts, p + 1);

        // Components in boundary-first order, both zones ascending.
        lvl.position.assign(n, 0);
        for (std::uint32_t c = 0; c < nparts; ++c) {
            Component comp;
            comp.level = level;
            comp.index = c;
            std::vector<Vertex> boundary = find_boundary(graph, assignment, c);
            std::vector<char> is_b(n, 0);
            for (Vertex v : boundary) is_b[v] = 1;
            comp.vertices = boundary;
            for (Vertex u = 0; u < n; ++u)
                if (assignment[u] == c && !is_b[u]) comp.vertices.push_back(u);
            comp.boundary_count = std::uint32_t(boundary.size());
            for (std::uint32_t i = 0; i < comp.vertices.size(); ++i)
                lvl.position[comp.vertices[i]] = i;
            lvl.components.push_back(std::move(comp));
        }

        // Per-component dense closure; feeds the virtual boundary edges and
        // is reused by the solver as its Step-1 result.
        for (const auto& comp : lvl.components) {
            DistanceMatrix d = csr_to_dense(graph, &comp.vertices);
            std::uint64_t finite = 0;
            for (std::size_t i = 0; i < d.rows(); ++i)
                for (std::size_t j = 0; j < d.cols(); ++j)
                    if (i != j && d(i, j) != kInf) ++finite;
            lvl.induced_edges.push_back(finite);
            lvl.intra_updates.push_back(kernels::fw_classic(d));
            lvl.intra.push_back(std::move(d));
        }

        lvl.boundary = build_boundary_graph(graph, lvl.components, lvl.intra);
        lvl.boundary.level = level;
        lvl.bg_offset.assign(nparts + 1, 0);
        for (std::uint32_t c = 0; c < nparts; ++c)
            lvl.bg_offset[c + 1] = lvl.bg_offset[c] + lvl.components[c].boundary_count;

        std::vector<Vertex> next_to_original(lvl.boundary.parent_ids.size());
        for (std::size_t b = 0; b < next_to_original.size(); ++b)
            next_to_original[b] = to_original[lvl.boundary.parent_ids[b]];

        h.levels.push_back(std::move(lvl));
        const HierarchyLevel& stored = h.levels.back();
        const Vertex bn = stored.boundary.graph.num_vertices();

        if (bn <= tile_limit) break; // terminated: top boundary graph fits a tile
        if (bn >= n || h.levels.size() >= opts.max_levels) {
            // Boundary set stopped shrinking (dense graphs go all-boundary);
            // the oversized top boundary graph is closed whole by the solver.
            h.stalled = true;
            break;
        }
        cur = &stored.boundary.graph;
        to_original = std::move(next_to_original);
    }
    return h;
}

} // namespace part
} // namespace rapid
