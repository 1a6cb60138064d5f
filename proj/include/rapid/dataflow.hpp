#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rapid/device_config.hpp"
#include "rapid/pim_model.hpp"
#include "rapid/trace.hpp"

namespace rapid {
namespace sim {

// Seven dataflow stages:
//   1 cold-storage component stream-in (CSR)
//   2 FW results streamed back in row-wise segments
//   3 boundary-graph construction + next-block prefetch
//   4 merge operand fetches during recursion
//   5 boundary injection sync
//   6 persistent write-back (dense boundary matrices + CSR results)
//   7 final merge operand fetches from bulk storage
struct StageIo {
    std::uint64_t bytes = 0;
    double seconds = 0;
    double cycles = 0; // seconds / clock; fractional for transfers
    double energy_j = 0;
};

struct BlockCost {
    std::uint64_t cycles = 0;
    double seconds = 0;
    double energy_j = 0;
    std::uint64_t cell_writes = 0;
};

// One scheduling step: the top boundary closure (level = -1), then each
// hierarchy level deepest-first.
struct StepCost {
    std::int32_t level = 0;
    std::uint64_t fw_cycles = 0; // makespan over fw tiles, local + reinject
    std::uint64_t mp_cycles = 0; // makespan over mp tiles
    double compute_seconds = 0;
    double prefetch_seconds = 0;  // stage-3(ii) stream-in for this step's blocks
    double overlapped_seconds = 0;
};

struct SimReport {
    std::string version;
    std::string config_hash;
    std::vector<std::string> placeholders_in_effect;
    DeviceConfig config;

    std::uint32_t n = 0;
    std::uint64_t m = 0;
    std::uint32_t tile_limit = 0;
    bool stalled = false;
    std::uint32_t num_levels = 0;

    std::array<StageIo, 7> stages;
    BlockCost fw_die;      // bit-serial add/min passes of FW runs
    BlockCost mp_die;      // bit-serial adds of MP merges
    BlockCost permutation; // panel rearrangement bursts
    BlockCost comparator;  // min-reduction trees

    std::vector<StepCost> steps;

    double compute_seconds = 0;
    double transfer_seconds = 0;
    double overlapped_seconds = 0; // prefetch hidden under compute
    double total_seconds = 0;      // compute + transfer - overlapped
    double total_energy_j = 0;
    std::uint64_t total_bytes = 0;
    std::uint64_t total_cell_writes = 0;
    std::uint64_t fenand_bytes_written = 0;
    std::uint64_t compute_cycles = 0; // fw + mp + permutation + comparator
};

// Analytic replay of a solver trace against a device config. Pure function;
// identical inputs give identical reports.
SimReport simulate_dataflow(const ExecutionTrace& trace, const DeviceConfig& cfg,
                            const std::vector<std::string>& overridden_fields = {});

std::string report_json(const SimReport& r);
std::string report_table(const SimReport& r);

// Flat key/value view used for CSV rows and merged tables.
std::vector<std::pair<std::string, std::string>> report_flat(const SimReport& r);

} // namespace sim
} // namespace rapid
