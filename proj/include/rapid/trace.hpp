#pragma once

#include <cstdint>
#include <vector>

namespace rapid {

// Execution trace of one solve: every kernel invocation and every matrix
// movement the hardware schedule would perform, in deterministic order.
// Consumed by the dataflow simulator.

struct FwEvent {
    enum class Phase : std::uint8_t { Seed, Local, Reinject };
    std::int32_t level = 0; // -1 for the top boundary graph closure
    Phase phase = Phase::Local;
    std::uint32_t n = 0;       // block side; pivots == n
    std::uint64_t updates = 0; // measured selective-write count
};

struct MpEvent {
    std::int32_t level = 0;
    std::uint32_t rows = 0;   // |C1|
    std::uint32_t inner1 = 0; // |B1|
    std::uint32_t inner2 = 0; // |B2|
    std::uint32_t cols = 0;   // |C2|
    std::uint64_t writes = 0; // finite output entries
};

struct LevelShape {
    std::uint32_t graph_n = 0;
    std::uint64_t graph_m = 0;
    std::vector<std::uint32_t> comp_sizes;
    std::vector<std::uint32_t> comp_boundaries;
    std::vector<std::uint64_t> comp_edges; // induced subgraph edge counts
    std::uint32_t bg_n = 0;
    std::uint64_t bg_m = 0;
};

struct ExecutionTrace {
    std::uint32_t n = 0;
    std::uint64_t m = 0;
    std::uint32_t tile_limit = 0;
    bool stalled = false;
    bool cross_materialized = false;
    std::vector<LevelShape> levels; // index = hierarchy level
    std::vector<FwEvent> fw;
    std::vector<MpEvent> mp;
    // Finite off-diagonal entries of each final level-0 component block (CSR
    // write-back size) and of materialized cross blocks.
    std::vector<std::uint64_t> result_entries;
    std::uint64_t cross_entries = 0;
};

} // namespace rapid
