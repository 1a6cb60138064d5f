#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rapid {
namespace sim {

// Every timing/energy/geometry parameter of the modeled hardware. Defaults
// for the compute arrays come from the device datasheet values; the memory
// tiers (HBM3, FeNAND) and transfer energies have no published numbers and
// ship as placeholders, flagged in every report header until a config file
// overrides them.
struct DeviceConfig {
    double clock_ns = 2.0;       // 500 MHz
    double set_reset_ns = 20.0;  // program pulse
    double write_energy_pj = 0.56;

    std::uint32_t unit_rows = 1024;
    std::uint32_t unit_cols = 1024;
    std::uint32_t units_per_tile = 130;
    std::uint32_t fw_tiles = 16;
    std::uint32_t mp_tiles = 16;

    std::uint32_t cycles_xor = 2;
    std::uint32_t cycles_nor = 1;
    std::uint32_t cycles_not = 1;
    std::uint32_t cycles_nand = 1;
    std::uint32_t cycles_minority = 1;
    std::uint32_t cycles_or = 1;
    std::uint32_t bits = 32;

    std::uint32_t dma_read_cycles = 1;
    std::uint32_t dma_write_cycles = 10;
    std::uint32_t burst_rows = 32;
    std::uint32_t comparator_stage_cycles = 6;
    std::uint32_t comparator_fanin = 32;

    double ucie_gbps = 2048.0; // 64 full-duplex lanes x 32 Gb/s
    double hbm_gbps = 6528.0;          // placeholder
    double fenand_gbps = 96.0;         // placeholder
    double ucie_pj_per_byte = 1.0;     // placeholder
    double hbm_pj_per_byte = 3.9;      // placeholder
    double fenand_pj_per_byte = 40.0;  // placeholder

    bool pipeline_prefetch = true;
    // Selective-write probability for runs without measured update counts.
    // Left unset deliberately: cost queries must either carry instrumented
    // counts or state an assumption explicitly.
    std::optional<double> update_probability;

    // Static echo only; nothing is derived from these.
    double fw_unit_area_um2 = 23821.24;
    double mp_unit_area_um2 = 24171.94;

    std::uint32_t write_pulse_cycles() const;

    void validate() const; // throws std::invalid_argument on a bad value
};

// Fields whose defaults are placeholders with no published source.
const std::vector<std::string>& placeholder_fields();

// Loads "key = value" lines ('#' comments) or a flat JSON object, keyed on
// the .json extension. Returns the config and the set of keys the file set.
std::pair<DeviceConfig, std::vector<std::string>> load_device_config(const std::string& path);

// Canonical "key = value" serialization (also the config-file format).
std::string serialize_device_config(const DeviceConfig& cfg);

// FNV-1a over the canonical serialization, as a fixed-width hex string.
std::string device_config_hash(const DeviceConfig& cfg);

} // namespace sim
} // namespace rapid
