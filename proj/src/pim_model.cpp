#include "rapid/pim_model.hpp"

#include <cmath>
#include <stdexcept>

namespace rapid {
namespace sim {

namespace {

double cycles_to_seconds(std::uint64_t cycles, const DeviceConfig& cfg) {
    return double(cycles) * cfg.clock_ns * 1e-9;
}

double write_energy_joules(std::uint64_t cell_writes, const DeviceConfig& cfg) {
    // Each selective word update programs up to `bits` cells.
    return double(cell_writes) * double(cfg.bits) * cfg.write_energy_pj * 1e-12;
}

std::uint64_t writes_from(std::optional<std::uint64_t> measured, double estimate_base,
                          const DeviceConfig& cfg) {
    if (measured) return *measured;
    if (estimate_base == 0) return 0;
    if (!cfg.update_probability)
        throw std::invalid_argument(
            "cell-write estimate needs measured updates or update_probability");
    return std::uint64_t(std::llround(*cfg.update_probability * estimate_base));
}

} // namespace

std::uint64_t bit_serial_cost(BitSerialOp op, const DeviceConfig& cfg) {
    const std::uint64_t per_bit =
        2ull * cfg.cycles_xor + cfg.cycles_minority + cfg.cycles_not;
    const std::uint64_t loop = std::uint64_t(cfg.bits) * per_bit;
    switch (op) {
        case BitSerialOp::Add:
            return loop;
        case BitSerialOp::SubMin:
            return loop + 1 + cfg.write_pulse_cycles();
    }
    return 0;
}

std::uint64_t comparator_tree_cycles(std::uint64_t width, const DeviceConfig& cfg) {
    if (width == 0) throw std::invalid_argument("comparator width must be >= 1");
    std::uint64_t stages = 0;
    std::uint64_t capacity = 1;
    while (capacity < width) {
        capacity *= cfg.comparator_fanin;
        ++stages;
    }
    return 1 + std::uint64_t(cfg.comparator_stage_cycles) * stages;
}

std::uint64_t permutation_unit_cost(std::uint64_t n, const DeviceConfig& cfg) {
    const std::uint64_t bursts = (n + cfg.burst_rows - 1) / cfg.burst_rows;
    return bursts * (std::uint64_t(cfg.dma_read_cycles) + cfg.dma_write_cycles);
}

TileCost simulate_fw_tile(std::uint32_t n, std::uint32_t pivots, const DeviceConfig& cfg,
                          std::optional<std::uint64_t> measured_updates) {
    if (n > cfg.unit_rows)
        throw std::invalid_argument("fw block side exceeds unit capacity");
    TileCost cost;
    if (n == 0 || pivots == 0) return cost;
    // n == 1 degenerates to the permutation alone; there is no main block.
    const std::uint64_t compute =
        n > 1 ? bit_serial_cost(BitSerialOp::Add, cfg) + bit_serial_cost(BitSerialOp::SubMin, cfg)
              : 0;
    const std::uint64_t per_pivot = compute + permutation_unit_cost(n, cfg);
    cost.cycles = std::uint64_t(pivots) * per_pivot;
    cost.seconds = cycles_to_seconds(cost.cycles, cfg);
    const double block = double(n - 1) * double(n - 1);
    cost.cell_writes = writes_from(measured_updates, double(pivots) * block, cfg);
    cost.energy_j = write_energy_joules(cost.cell_writes, cfg);
    return cost;
}

TileCost simulate_mp_tile(std::uint64_t rows, std::uint32_t inner, const DeviceConfig& cfg,
                          std::optional<std::uint64_t> measured_updates) {
    if (inner > cfg.unit_cols)
        throw std::invalid_argument("mp reduction width exceeds unit capacity");
    TileCost cost;
    if (rows == 0) return cost;
    const std::uint64_t per_row =
        2 * bit_serial_cost(BitSerialOp::Add, cfg) + 2 * comparator_tree_cycles(inner, cfg);
    cost.cycles = rows * per_row;
    cost.seconds = cycles_to_seconds(cost.cycles, cfg);
    cost.cell_writes = writes_from(measured_updates, double(rows) * 2.0, cfg);
    cost.energy_j = write_energy_joules(cost.cell_writes, cfg);
    return cost;
}

} // namespace sim
} // namespace rapid
