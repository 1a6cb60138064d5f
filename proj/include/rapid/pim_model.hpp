#pragma once

#include <cstdint>
#include <optional>

#include "rapid/device_config.hpp"

namespace rapid {
namespace sim {

enum class BitSerialOp { Add, SubMin };

// Cycles for one word-parallel bit-serial operation across a block.
//   Add:    bits x (2 XOR + minority + NOT)  -- sum and carry per bit
//   SubMin: the same bit loop, one sign-evaluation cycle, and the program
//           pulse slot for the masked selective write-back.
std::uint64_t bit_serial_cost(BitSerialOp op, const DeviceConfig& cfg);

// Pipelined tree min-reduction: 1 stream-in cycle plus one stage delay per
// fanin level. 1024 inputs at fanin 32 take 1 + 6*2 = 13 cycles.
std::uint64_t comparator_tree_cycles(std::uint64_t width, const DeviceConfig& cfg);

// Burst-buffered panel rearrangement: ceil(n / burst_rows) bursts, each one
// DMA read plus one DMA write.
std::uint64_t permutation_unit_cost(std::uint64_t n, const DeviceConfig& cfg);

struct TileCost {
    std::uint64_t cycles = 0;
    double seconds = 0;      // cycles x clock, exactly
    double energy_j = 0;
    std::uint64_t cell_writes = 0; // selective word updates (wear statistic)
};

// One distance block of side n processed for `pivots` pivot steps: per pivot
// one block-wide add, one block-wide min-update, one panel permutation.
// cell_writes comes from `measured_updates` when co-run with the functional
// kernel, otherwise from cfg.update_probability; with neither, throws.
TileCost simulate_fw_tile(std::uint32_t n, std::uint32_t pivots, const DeviceConfig& cfg,
                          std::optional<std::uint64_t> measured_updates = std::nullopt);

// Two-stage min-plus merge streaming `rows` logical rows, each stage one add
// plus one `inner`-wide min reduction.
TileCost simulate_mp_tile(std::uint64_t rows, std::uint32_t inner, const DeviceConfig& cfg,
                          std::optional<std::uint64_t> measured_updates = std::nullopt);

} // namespace sim
} // namespace rapid
