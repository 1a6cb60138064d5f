#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "rapid/dataflow.hpp"
#include "rapid/device_config.hpp"
#include "rapid/error.hpp"
#include "rapid/generators.hpp"
#include "rapid/graph.hpp"
#include "rapid/kernels.hpp"
#include "rapid/pim_model.hpp"
#include "rapid/solver.hpp"

using namespace rapid;
using namespace rapid::sim;

namespace {

ExecutionTrace trace_of(const Graph& g, std::uint32_t tile_limit) {
    solver::SolverConfig cfg;
    cfg.tile_limit = tile_limit;
    return solver::solve_apsp(g, cfg).trace;
}

} // namespace

TEST_CASE("bit_serial_cost") {
    DeviceConfig cfg;
    SUBCASE("defaults") {
        CHECK(bit_serial_cost(BitSerialOp::Add, cfg) == 192); // 32 x 6
        CHECK(bit_serial_cost(BitSerialOp::SubMin, cfg) == 192 + 1 + 10);
    }
    SUBCASE("single bit") {
        cfg.bits = 1;
        CHECK(bit_serial_cost(BitSerialOp::Add, cfg) == 6);
    }
    SUBCASE("minimum legal xor latency") {
        cfg.cycles_xor = 1;
        CHECK(bit_serial_cost(BitSerialOp::Add, cfg) == 32 * 4);
    }
}

TEST_CASE("comparator_tree_cycles") {
    DeviceConfig cfg;
    CHECK(comparator_tree_cycles(1024, cfg) == 13); // 1 + 6x2
    CHECK(comparator_tree_cycles(1, cfg) == 1);
    CHECK(comparator_tree_cycles(32, cfg) == 7);
    CHECK(comparator_tree_cycles(33, cfg) == 13);
    CHECK(comparator_tree_cycles(1025, cfg) == 19);
    CHECK_THROWS_AS(comparator_tree_cycles(0, cfg), std::invalid_argument);
}

TEST_CASE("permutation_unit_cost") {
    DeviceConfig cfg;
    CHECK(permutation_unit_cost(32, cfg) == 11);
    CHECK(permutation_unit_cost(1024, cfg) == 352); // 32 bursts
    CHECK(permutation_unit_cost(1, cfg) == 11);     // one partial burst
    CHECK(permutation_unit_cost(33, cfg) == 22);
}

TEST_CASE("simulate_fw_tile") {
    DeviceConfig cfg;
    SUBCASE("degenerate single-vertex block is permutation only") {
        TileCost c = simulate_fw_tile(1, 1, cfg, std::uint64_t(0));
        CHECK(c.cycles == 11);
        CHECK(c.cell_writes == 0);
    }
    SUBCASE("full-size block, frozen regression constant") {
        TileCost c = simulate_fw_tile(1024, 1024, cfg, std::uint64_t(0));
        // 1024 x (192 + 203 + 352)
        CHECK(c.cycles == 764928);
        CHECK(c.seconds == doctest::Approx(764928 * 2e-9));
    }
    SUBCASE("capacity error") {
        CHECK_THROWS_AS(simulate_fw_tile(1025, 1, cfg, std::uint64_t(0)),
                        std::invalid_argument);
    }
    SUBCASE("measured updates flow into writes and energy") {
        TileCost c = simulate_fw_tile(64, 64, cfg, std::uint64_t(500));
        CHECK(c.cell_writes == 500);
        CHECK(c.energy_j == doctest::Approx(500.0 * 32 * 0.56e-12));
        CHECK(c.energy_j >= double(c.cell_writes) * cfg.write_energy_pj * 1e-12);
    }
    SUBCASE("probability estimate") {
        cfg.update_probability = 0.25;
        TileCost c = simulate_fw_tile(65, 65, cfg);
        CHECK(c.cell_writes == std::uint64_t(std::llround(0.25 * 65 * 64 * 64)));
    }
    SUBCASE("no measurement and no probability is an error") {
        CHECK_THROWS_AS(simulate_fw_tile(64, 64, cfg), std::invalid_argument);
    }
}

TEST_CASE("simulate_mp_tile") {
    DeviceConfig cfg;
    SUBCASE("single row at full width") {
        TileCost c = simulate_mp_tile(1, 1024, cfg, std::uint64_t(0));
        CHECK(c.cycles == 410); // 2x192 + 2x13
    }
    SUBCASE("zero rows cost nothing") {
        TileCost c = simulate_mp_tile(0, 1024, cfg);
        CHECK(c.cycles == 0);
        CHECK(c.cell_writes == 0);
    }
    SUBCASE("linear in rows") {
        TileCost one = simulate_mp_tile(10, 256, cfg, std::uint64_t(0));
        TileCost two = simulate_mp_tile(20, 256, cfg, std::uint64_t(0));
        CHECK(two.cycles == 2 * one.cycles);
    }
    SUBCASE("capacity error") {
        CHECK_THROWS_AS(simulate_mp_tile(1, 1025, cfg, std::uint64_t(0)),
                        std::invalid_argument);
    }
}

TEST_CASE("device config") {
    SUBCASE("defaults satisfy the datasheet constants") {
        DeviceConfig cfg;
        cfg.validate();
        CHECK(cfg.clock_ns == 2.0);
        CHECK(cfg.write_pulse_cycles() == 10);
        CHECK(cfg.write_energy_pj == 0.56);
        CHECK(cfg.ucie_gbps == 2048.0);
    }
    SUBCASE("key = value file") {
        const char* path = "device_test.cfg";
        {
            std::ofstream f(path);
            f << "# test overrides\n";
            f << "clock_ns = 1.5\n";
            f << "hbm_gbps = 4096\n";
            f << "pipeline_prefetch = false\n";
        }
        auto [cfg, seen] = load_device_config(path);
        CHECK(cfg.clock_ns == 1.5);
        CHECK(cfg.hbm_gbps == 4096.0);
        CHECK_FALSE(cfg.pipeline_prefetch);
        CHECK(seen.size() == 3);
        std::remove(path);
    }
    SUBCASE("json file") {
        const char* path = "device_test.json";
        {
            std::ofstream f(path);
            f << "{\"fenand_gbps\": 128, \"bits\": 16}\n";
        }
        auto [cfg, seen] = load_device_config(path);
        CHECK(cfg.fenand_gbps == 128.0);
        CHECK(cfg.bits == 16);
        std::remove(path);
    }
    SUBCASE("unknown key rejected") {
        const char* path = "device_bad.cfg";
        {
            std::ofstream f(path);
            f << "not_a_field = 3\n";
        }
        CHECK_THROWS_AS(load_device_config(path), ParseError);
        std::remove(path);
    }
    SUBCASE("invalid values rejected") {
        DeviceConfig cfg;
        cfg.clock_ns = 0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = DeviceConfig{};
        cfg.update_probability = 1.5;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("hash tracks content") {
        DeviceConfig a, b;
        CHECK(device_config_hash(a) == device_config_hash(b));
        b.hbm_gbps = 1.0;
        CHECK(device_config_hash(a) != device_config_hash(b));
    }
    SUBCASE("placeholders are the tier parameters") {
        const auto& p = placeholder_fields();
        CHECK(std::find(p.begin(), p.end(), "hbm_gbps") != p.end());
        CHECK(std::find(p.begin(), p.end(), "fenand_gbps") != p.end());
    }
}

TEST_CASE("simulate_dataflow") {
    DeviceConfig cfg;
    SUBCASE("known transfer arithmetic: 4 MB over the 2048 Gb/s link") {
        // Synthetic trace with a single recursion-level merge moving exactly
        // 4e6 bytes of operands (1e6 words).
        ExecutionTrace t;
        t.n = 2;
        t.m = 0;
        t.tile_limit = 2;
        t.levels.resize(2);
        t.levels[0].graph_n = 2;
        t.levels[1].graph_n = 1;
        t.mp.push_back({1, 1000, 1000, 0, 0, 0});
        SimReport r = simulate_dataflow(t, cfg);
        CHECK(r.stages[3].bytes == 4000000);
        CHECK(r.stages[3].seconds == doctest::Approx(15.625e-6).epsilon(1e-12));
    }
    SUBCASE("single-component graph keeps stages 4, 5, 7 empty") {
        Graph g = gen_er(48, 5.0, 2);
        ExecutionTrace t = trace_of(g, 1024);
        SimReport r = simulate_dataflow(t, cfg);
        CHECK(r.stages[3].bytes == 0);
        CHECK(r.stages[4].bytes == 0);
        CHECK(r.stages[6].bytes == 0);
        CHECK(r.stages[0].bytes > 0);
        CHECK(r.stages[1].bytes > 0);
    }
    SUBCASE("compute cycles are size-driven, not degree-driven") {
        SimReport lo = simulate_dataflow(trace_of(gen_er(256, 4.0, 5), 1024), cfg);
        SimReport hi = simulate_dataflow(trace_of(gen_er(256, 12.0, 5), 1024), cfg);
        CHECK(lo.compute_cycles == hi.compute_cycles);
        CHECK(lo.stages[0].bytes != hi.stages[0].bytes);
    }
    SUBCASE("monotone in graph size") {
        SimReport a = simulate_dataflow(trace_of(gen_er(64, 6.0, 7), 1024), cfg);
        SimReport b = simulate_dataflow(trace_of(gen_er(128, 6.0, 7), 1024), cfg);
        SimReport c = simulate_dataflow(trace_of(gen_er(256, 6.0, 7), 1024), cfg);
        CHECK(a.total_seconds < b.total_seconds);
        CHECK(b.total_seconds < c.total_seconds);
        CHECK(a.compute_cycles < b.compute_cycles);
        CHECK(b.compute_cycles < c.compute_cycles);
    }
    SUBCASE("instrumented cell writes equal the functional update counts") {
        Graph g = gen_nws(16, 4, 0.3, 13);
        ExecutionTrace t = trace_of(g, 1024); // single tile: one FW run
        SimReport r = simulate_dataflow(t, cfg);
        DistanceMatrix d = csr_to_dense(g);
        const std::uint64_t updates = kernels::fw_remapped(d);
        CHECK(r.fw_die.cell_writes == updates);
    }
    SUBCASE("conservation: stage sums and block sums match the totals") {
        Graph g = gen_nws(90, 6, 0.1, 17);
        ExecutionTrace t = trace_of(g, 16);
        SimReport r = simulate_dataflow(t, cfg);
        std::uint64_t bytes = 0;
        double transfer = 0, energy = 0;
        for (int s = 0; s < 7; ++s) {
            bytes += r.stages[s].bytes;
            transfer += r.stages[s].seconds;
            energy += r.stages[s].energy_j;
        }
        CHECK(bytes == r.total_bytes);
        CHECK(transfer == doctest::Approx(r.transfer_seconds));
        CHECK(r.compute_cycles == r.fw_die.cycles + r.mp_die.cycles + r.permutation.cycles +
                                      r.comparator.cycles);
        CHECK(r.total_energy_j ==
              doctest::Approx(energy + r.fw_die.energy_j + r.mp_die.energy_j));
        CHECK(r.total_seconds ==
              doctest::Approx(r.compute_seconds + r.transfer_seconds - r.overlapped_seconds));
        CHECK(r.total_cell_writes == r.fw_die.cell_writes + r.mp_die.cell_writes);
        CHECK(r.fenand_bytes_written == r.stages[5].bytes);
        // Per-step compute adds up to the compute total.
        double step_compute = 0;
        for (const auto& step : r.steps) step_compute += step.compute_seconds;
        CHECK(step_compute == doctest::Approx(r.compute_seconds));
        // seconds = cycles x clock for the compute blocks.
        CHECK(r.fw_die.seconds == doctest::Approx(double(r.fw_die.cycles) * 2e-9));
        CHECK(r.comparator.seconds == doctest::Approx(double(r.comparator.cycles) * 2e-9));
        // Energy floor: writes x per-cell program energy.
        CHECK(r.total_energy_j >= double(r.total_cell_writes) * cfg.write_energy_pj * 1e-12);
    }
    SUBCASE("pipelining only removes prefetch time") {
        Graph g = gen_nws(120, 6, 0.1, 19);
        ExecutionTrace t = trace_of(g, 16);
        DeviceConfig off = cfg;
        off.pipeline_prefetch = false;
        SimReport with = simulate_dataflow(t, cfg);
        SimReport without = simulate_dataflow(t, off);
        CHECK(without.overlapped_seconds == 0);
        CHECK(with.total_seconds <= without.total_seconds);
        CHECK(with.compute_seconds == without.compute_seconds);
        CHECK(with.transfer_seconds == without.transfer_seconds);
    }
    SUBCASE("fewer tiles cannot be faster") {
        Graph g = gen_nws(120, 6, 0.1, 19);
        ExecutionTrace t = trace_of(g, 16);
        DeviceConfig few = cfg;
        few.fw_tiles = 1;
        few.mp_tiles = 1;
        SimReport wide = simulate_dataflow(t, cfg);
        SimReport narrow = simulate_dataflow(t, few);
        CHECK(narrow.compute_seconds >= wide.compute_seconds);
    }
}

TEST_CASE("report emission") {
    DeviceConfig cfg;
    Graph g = gen_nws(60, 4, 0.2, 23);
    SimReport r = simulate_dataflow(trace_of(g, 16), cfg);
    SUBCASE("json parses and echoes the constants") {
        nlohmann::json j = nlohmann::json::parse(report_json(r));
        CHECK(j["header"]["clock_ns"].get<double>() == 2.0);
        CHECK(j["header"]["write_pulse_cycles"].get<int>() == 10);
        CHECK(j["header"]["write_energy_pj"].get<double>() == 0.56);
        CHECK(j["header"]["ucie_gbps"].get<double>() == 2048.0);
        CHECK(j["header"]["config_hash"].get<std::string>() == r.config_hash);
        CHECK(j["stages"].size() == 7);
        CHECK(j["table_row"].contains("compute_cycles"));
        // Placeholder tiers surface in the header until a config overrides.
        const auto ph = j["header"]["placeholders_in_effect"];
        CHECK(ph.size() == placeholder_fields().size());
    }
    SUBCASE("text table mentions the hash and placeholders") {
        const std::string table = report_table(r);
        CHECK(table.find(r.config_hash) != std::string::npos);
        CHECK(table.find("hbm_gbps") != std::string::npos);
        CHECK(table.find("stage") != std::string::npos);
    }
    SUBCASE("flat view is stable") {
        auto flat = report_flat(r);
        CHECK(flat.size() >= 20);
        CHECK(flat.front().first == "n");
        auto again = report_flat(r);
        CHECK(flat == again);
    }
    SUBCASE("overridden placeholders drop out of the header") {
        SimReport r2 = simulate_dataflow(trace_of(g, 16), cfg, {"hbm_gbps", "fenand_gbps"});
        CHECK(r2.placeholders_in_effect.size() == placeholder_fields().size() - 2);
    }
}
