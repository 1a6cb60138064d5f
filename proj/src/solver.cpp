#include "rapid/solver.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "rapid/dijkstra.hpp"
#include "rapid/error.hpp"
#include "rapid/generators.hpp"
#include "rapid/graph_io.hpp"
#include "rapid/kernels.hpp"
#include "rapid/parallel.hpp"
#include "rapid/version.hpp"

namespace rapid {
namespace solver {

namespace {

// Boundary-graph ids of component c's boundary vertices at one level; DB
// matrices are indexed by these.
std::vector<std::uint32_t> db_indices(const part::HierarchyLevel& lvl, std::uint32_t c) {
    const std::uint32_t bc = lvl.components[c].boundary_count;
    std::vector<std::uint32_t> idx(bc);
    for (std::uint32_t a = 0; a < bc; ++a) idx[a] = std::uint32_t(lvl.bg_offset[c] + a);
    return idx;
}

struct ComponentPair {
    std::uint32_t c1, c2;
};

// Ordered component pairs that can reach each other through the boundary.
std::vector<ComponentPair> mergeable_pairs(const part::HierarchyLevel& lvl) {
    std::vector<ComponentPair> pairs;
    const std::uint32_t k = std::uint32_t(lvl.num_components());
    for (std::uint32_t c1 = 0; c1 < k; ++c1)
        for (std::uint32_t c2 = 0; c2 < k; ++c2)
            if (c1 != c2 && lvl.components[c1].boundary_count > 0 &&
                lvl.components[c2].boundary_count > 0)
                pairs.push_back({c1, c2});
    return pairs;
}

std::uint64_t finite_off_diagonal(const DistanceMatrix& d) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (i != j && d(i, j) != kInf) ++count;
    return count;
}

void record_shapes(ExecutionTrace& trace, const Graph& g, const part::PartitionHierarchy& h) {
    trace.n = g.num_vertices();
    trace.m = g.num_edges();
    trace.tile_limit = h.tile_limit;
    trace.stalled = h.stalled;
    for (std::size_t l = 0; l < h.levels.size(); ++l) {
        const auto& lvl = h.levels[l];
        const Graph& graph = h.level_graph(l, g);
        LevelShape shape;
        shape.graph_n = graph.num_vertices();
        shape.graph_m = graph.num_edges();
        for (const auto& comp : lvl.components) {
            shape.comp_sizes.push_back(std::uint32_t(comp.vertices.size()));
            shape.comp_boundaries.push_back(comp.boundary_count);
        }
        shape.comp_edges = lvl.induced_edges;
        shape.bg_n = lvl.boundary.graph.num_vertices();
        shape.bg_m = std::uint64_t(lvl.boundary.graph.num_edges());
        trace.levels.push_back(std::move(shape));
    }
}

} // namespace

ApspResult solve_apsp(const Graph& g, const SolverConfig& cfg) {
    part::HierarchyOptions opts;
    opts.imbalance = cfg.imbalance;
    opts.max_levels = cfg.max_levels;
    opts.level0_assignment = cfg.level0_assignment;

    ApspResult result;
    result.graph = g;
    result.config = cfg;
    result.hierarchy = part::build_hierarchy(g, cfg.tile_limit, opts);
    const auto& h = result.hierarchy;
    record_shapes(result.trace, g, h);
    result.trace.cross_materialized = cfg.materialize_cross;

    const std::size_t top = h.levels.size() - 1;

    // Closure of the top boundary graph seeds the downward pass. When the
    // recursion stalled this graph exceeds the tile limit and is closed here
    // in one piece.
    DistanceMatrix db;
    if (h.top_boundary().graph.num_vertices() > 0) {
        db = csr_to_dense(h.top_boundary().graph);
        const std::uint64_t updates = kernels::fw_classic(db);
        result.trace.fw.push_back(
            {-1, FwEvent::Phase::Seed, std::uint32_t(db.side()), updates});
    }

    for (std::size_t l = top + 1; l-- > 0;) {
        const part::HierarchyLevel& lvl = h.levels[l];
        const std::size_t k = lvl.num_components();

        // Step 1: per-component closures, cached from hierarchy construction.
        std::vector<DistanceMatrix> ds = lvl.intra;
        for (std::size_t c = 0; c < k; ++c)
            result.trace.fw.push_back({std::int32_t(l), FwEvent::Phase::Local,
                                       std::uint32_t(ds[c].side()), lvl.intra_updates[c]});

        // Step 3: inject boundary closure, re-run FW.
        if (db.rows() > 0) {
            std::vector<std::uint64_t> reinject_updates(k, 0);
            std::vector<char> reinjected(k, 0);
            parallel_for(k, cfg.workers, [&](std::size_t c) {
                const std::uint32_t bc = lvl.components[c].boundary_count;
                if (bc == 0) return;
                const auto dbids = db_indices(lvl, std::uint32_t(c));
                DistanceMatrix block = kernels::restrict_to(db, dbids);
                std::vector<std::uint32_t> local(bc);
                for (std::uint32_t a = 0; a < bc; ++a) local[a] = a; // boundary-first
                kernels::inject(ds[c], block, local);
                reinject_updates[c] = kernels::fw_classic(ds[c]);
                reinjected[c] = 1;
            });
            for (std::size_t c = 0; c < k; ++c)
                if (reinjected[c])
                    result.trace.fw.push_back({std::int32_t(l), FwEvent::Phase::Reinject,
                                               std::uint32_t(ds[c].side()),
                                               reinject_updates[c]});
        }

        if (l > 0) {
            // Step 4 plus the upward merge: assemble the full closure of this
            // level's graph; it is the boundary matrix of the level below.
            const std::uint32_t s = std::uint32_t(lvl.assignment.size());
            DistanceMatrix next(s, s, kInf);
            for (std::size_t c = 0; c < k; ++c) {
                const auto& verts = lvl.components[c].vertices;
                for (std::size_t a = 0; a < verts.size(); ++a)
                    for (std::size_t b = 0; b < verts.size(); ++b)
                        next(verts[a], verts[b]) = ds[c](a, b);
            }
            if (db.rows() > 0 && k > 1) {
                const std::vector<ComponentPair> pairs = mergeable_pairs(lvl);
                std::vector<std::uint64_t> writes(pairs.size(), 0);
                parallel_for(pairs.size(), cfg.workers, [&](std::size_t p) {
                    const auto [c1, c2] = pairs[p];
                    DistanceMatrix block =
                        kernels::cross_merge(ds[c1], db, ds[c2], db_indices(lvl, c1),
                                             db_indices(lvl, c2), &writes[p]);
                    const auto& v1 = lvl.components[c1].vertices;
                    const auto& v2 = lvl.components[c2].vertices;
                    for (std::size_t a = 0; a < v1.size(); ++a)
                        for (std::size_t b = 0; b < v2.size(); ++b)
                            next(v1[a], v2[b]) = block(a, b);
                });
                for (std::size_t p = 0; p < pairs.size(); ++p)
                    result.trace.mp.push_back(
                        {std::int32_t(l), std::uint32_t(ds[pairs[p].c1].rows()),
                         lvl.components[pairs[p].c1].boundary_count,
                         lvl.components[pairs[p].c2].boundary_count,
                         std::uint32_t(ds[pairs[p].c2].cols()), writes[p]});
            }
            db = std::move(next);
        } else {
            // Level 0: keep blocks and the boundary closure for queries.
            // Cross blocks default to compute-on-query.
            result.top_db = std::move(db);
            result.component_distances = std::move(ds);
            if (cfg.materialize_cross && k > 1 && result.top_db.rows() > 0) {
                const std::vector<ComponentPair> pairs = mergeable_pairs(lvl);
                std::vector<std::uint64_t> writes(pairs.size(), 0);
                std::vector<DistanceMatrix> blocks(pairs.size());
                parallel_for(pairs.size(), cfg.workers, [&](std::size_t p) {
                    const auto [c1, c2] = pairs[p];
                    blocks[p] = kernels::cross_merge(result.component_distances[c1],
                                                     result.top_db,
                                                     result.component_distances[c2],
                                                     db_indices(lvl, c1), db_indices(lvl, c2),
                                                     &writes[p]);
                });
                for (std::size_t p = 0; p < pairs.size(); ++p) {
                    result.trace.mp.push_back(
                        {0, std::uint32_t(result.component_distances[pairs[p].c1].rows()),
                         lvl.components[pairs[p].c1].boundary_count,
                         lvl.components[pairs[p].c2].boundary_count,
                         std::uint32_t(result.component_distances[pairs[p].c2].cols()),
                         writes[p]});
                    result.trace.cross_entries += writes[p];
                    result.cross_blocks.emplace(std::make_pair(pairs[p].c1, pairs[p].c2),
                                                std::move(blocks[p]));
                }
            }
            for (const auto& d : result.component_distances)
                result.trace.result_entries.push_back(finite_off_diagonal(d));
        }
    }
    return result;
}

Distance ApspResult::query(Vertex u, Vertex v) const {
    if (u >= graph.num_vertices() || v >= graph.num_vertices())
        throw std::out_of_range("query: vertex out of range");
    const auto& lvl = hierarchy.levels[0];
    const std::uint32_t c1 = lvl.assignment[u];
    const std::uint32_t c2 = lvl.assignment[v];
    const std::uint32_t pu = lvl.position[u];
    const std::uint32_t pv = lvl.position[v];
    if (c1 == c2) return component_distances[c1](pu, pv);

    if (auto it = cross_blocks.find({c1, c2}); it != cross_blocks.end())
        return it->second(pu, pv);

    const std::uint32_t b1 = lvl.components[c1].boundary_count;
    const std::uint32_t b2 = lvl.components[c2].boundary_count;
    if (b1 == 0 || b2 == 0 || top_db.rows() == 0) return kInf;
    const DistanceMatrix& d1 = component_distances[c1];
    const DistanceMatrix& d2 = component_distances[c2];
    Distance best = kInf;
    for (std::uint32_t i = 0; i < b1; ++i) {
        const Distance to_b = d1(pu, i);
        if (to_b == kInf) continue;
        const std::size_t gi = lvl.bg_offset[c1] + i;
        for (std::uint32_t j = 0; j < b2; ++j) {
            const Distance cand =
                saturating_add3(to_b, top_db(gi, lvl.bg_offset[c2] + j), d2(j, pv));
            if (cand < best) best = cand;
        }
    }
    return best;
}

DistanceMatrix full_distance_matrix(const ApspResult& r) {
    const Vertex n = r.graph.num_vertices();
    DistanceMatrix full(n, n, kInf);
    const auto& lvl = r.hierarchy.levels[0];
    const std::size_t k = lvl.num_components();
    for (std::size_t c = 0; c < k; ++c) {
        const auto& verts = lvl.components[c].vertices;
        const auto& d = r.component_distances[c];
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = 0; b < verts.size(); ++b) full(verts[a], verts[b]) = d(a, b);
    }
    if (r.top_db.rows() == 0) return full;
    for (const auto& [c1, c2] : mergeable_pairs(lvl)) {
        DistanceMatrix block =
            kernels::cross_merge(r.component_distances[c1], r.top_db,
                                 r.component_distances[c2], db_indices(lvl, c1),
                                 db_indices(lvl, c2));
        const auto& v1 = lvl.components[c1].vertices;
        const auto& v2 = lvl.components[c2].vertices;
        for (std::size_t a = 0; a < v1.size(); ++a)
            for (std::size_t b = 0; b < v2.size(); ++b) full(v1[a], v2[b]) = block(a, b);
    }
    return full;
}

VerifyReport verify_against_oracle(const Graph& g, const ApspResult& r, std::uint32_t sample,
                                   std::uint64_t seed) {
    if (sample == 0) throw std::invalid_argument("verify_against_oracle: sample must be >= 1");
    const Vertex n = g.num_vertices();
    std::vector<Vertex> sources;
    if (sample >= n) {
        sources.resize(n);
        for (Vertex u = 0; u < n; ++u) sources[u] = u;
    } else {
        Rng rng(seed);
        std::vector<char> taken(n, 0);
        while (sources.size() < sample) {
            const Vertex s = Vertex(rng.bounded(n));
            if (!taken[s]) {
                taken[s] = 1;
                sources.push_back(s);
            }
        }
    }
    VerifyReport report;
    report.sources_checked = std::uint32_t(sources.size());
    for (Vertex s : sources) {
        const std::vector<Distance> oracle = dijkstra(g, s);
        for (Vertex t = 0; t < n; ++t) {
            const Distance got = r.query(s, t);
            if (got != oracle[t]) report.mismatches.push_back({s, t, oracle[t], got});
        }
    }
    return report;
}

void save_result(const ApspResult& r, const std::string& dir,
                 const std::string& input_description) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "blocks");

    nlohmann::json manifest;
    manifest["schema_version"] = 1;
    manifest["kind"] = "apsp_manifest";
    manifest["version"] = kVersion;
    manifest["input"] = {{"n", r.graph.num_vertices()},
                         {"m", r.graph.num_edges()},
                         {"description", input_description}};
    manifest["config"] = {{"tile_limit", r.config.tile_limit},
                          {"imbalance", r.config.imbalance},
                          {"max_levels", r.config.max_levels},
                          {"workers", r.config.workers},
                          {"materialize_cross", r.config.materialize_cross}};

    const auto& h = r.hierarchy;
    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t l = 0; l < h.levels.size(); ++l) {
        const auto& lvl = h.levels[l];
        nlohmann::json jl;
        jl["graph_n"] = l == 0 ? r.graph.num_vertices()
                               : h.levels[l - 1].boundary.graph.num_vertices();
        nlohmann::json sizes = nlohmann::json::array();
        nlohmann::json boundaries = nlohmann::json::array();
        for (const auto& comp : lvl.components) {
            sizes.push_back(comp.vertices.size());
            boundaries.push_back(comp.boundary_count);
        }
        jl["component_sizes"] = sizes;
        jl["boundary_sizes"] = boundaries;
        jl["boundary_graph_n"] = lvl.boundary.graph.num_vertices();
        jl["boundary_graph_m"] = lvl.boundary.graph.num_edges();
        levels.push_back(jl);
    }
    manifest["hierarchy"] = {{"tile_limit", h.tile_limit},
                             {"stalled", h.stalled},
                             {"num_levels", h.levels.size()},
                             {"levels", levels}};

    const auto& lvl0 = h.levels[0];
    manifest["id_maps"] = {{"level0_assignment", lvl0.assignment},
                           {"level0_position", lvl0.position},
                           {"boundary_parent_ids", lvl0.boundary.parent_ids}};

    nlohmann::json files;
    nlohmann::json comp_files = nlohmann::json::array();
    char name[64];
    for (std::size_t c = 0; c < r.component_distances.size(); ++c) {
        std::snprintf(name, sizeof(name), "blocks/comp_%04zu.csr", c);
        save_binary_csr_file(dense_to_csr(r.component_distances[c]),
                             (fs::path(dir) / name).string());
        comp_files.push_back(name);
    }
    files["components"] = comp_files;
    if (r.top_db.rows() > 0) {
        save_binary_csr_file(dense_to_csr(r.top_db), (fs::path(dir) / "blocks/top_db.csr").string());
        files["top_db"] = "blocks/top_db.csr";
    }
    nlohmann::json cross_files = nlohmann::json::array();
    for (const auto& [key, block] : r.cross_blocks) {
        std::snprintf(name, sizeof(name), "blocks/cross_%04u_%04u.csr", key.first, key.second);
        // Rectangular block persisted as a bipartite graph: rows 0..r-1,
        // columns r..r+c-1, one edge per finite entry.
        std::vector<EdgeTriple> entries;
        for (std::size_t i = 0; i < block.rows(); ++i)
            for (std::size_t j = 0; j < block.cols(); ++j)
                if (block(i, j) != kInf)
                    entries.push_back({Vertex(i), Vertex(block.rows() + j), block(i, j)});
        Graph bip = Graph::from_edges(Vertex(block.rows() + block.cols()), std::move(entries));
        save_binary_csr_file(bip, (fs::path(dir) / name).string());
        cross_files.push_back(nlohmann::json{{"file", name},
                                             {"from_component", key.first},
                                             {"to_component", key.second},
                                             {"rows", block.rows()},
                                             {"cols", block.cols()}});
    }
    files["cross"] = cross_files;
    files["cross_format"] = "bipartite";
    manifest["files"] = files;

    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw IoError("cannot write manifest in " + dir);
    out << manifest.dump(2) << '\n';
}

} // namespace solver
} // namespace rapid
