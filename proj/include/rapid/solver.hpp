#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rapid/graph.hpp"
#include "rapid/hierarchy.hpp"
#include "rapid/trace.hpp"

namespace rapid {
namespace solver {

struct SolverConfig {
    std::uint32_t tile_limit = 1024;
    double imbalance = 1.10;
    std::uint32_t max_levels = 64;
    std::uint32_t workers = 1;
    bool materialize_cross = false;
    std::optional<std::vector<std::uint32_t>> level0_assignment;
};

// Queryable APSP closure: per-component post-injection distance blocks plus
// the final boundary-to-boundary matrix. Any cross-component pair resolves
// through one merge over top_db.
struct ApspResult {
    Graph graph;
    part::PartitionHierarchy hierarchy;
    std::vector<DistanceMatrix> component_distances; // level 0, post injection
    DistanceMatrix top_db;                           // over level-0 boundary-graph ids
    std::map<std::pair<std::uint32_t, std::uint32_t>, DistanceMatrix> cross_blocks;
    SolverConfig config;
    ExecutionTrace trace;

    Distance query(Vertex u, Vertex v) const;
};

ApspResult solve_apsp(const Graph& g, const SolverConfig& cfg);

// Full n x n closure assembled from the blocks; for verification and export.
DistanceMatrix full_distance_matrix(const ApspResult& r);

struct Mismatch {
    Vertex source = 0;
    Vertex target = 0;
    Distance expected = 0;
    Distance actual = 0;
};

struct VerifyReport {
    std::uint32_t sources_checked = 0;
    std::vector<Mismatch> mismatches; // empty means pass
    bool passed() const { return mismatches.empty(); }
};

// Dijkstra from `sample` distinct random sources; compares every target.
VerifyReport verify_against_oracle(const Graph& g, const ApspResult& r, std::uint32_t sample,
                                   std::uint64_t seed);

// Result persistence: per-component binary CSR blocks plus manifest.json.
void save_result(const ApspResult& r, const std::string& dir,
                 const std::string& input_description);

} // namespace solver
} // namespace rapid
