#include "rapid/dataflow.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

#include "rapid/graph_io.hpp"
#include "rapid/version.hpp"

namespace rapid {
namespace sim {

namespace {

constexpr std::uint64_t kWordBytes = 4;

double transfer_seconds(std::uint64_t bytes, double gbps) {
    return double(bytes) * 8.0 / (gbps * 1e9);
}

struct FwSplit {
    std::uint64_t compute_cycles = 0; // add + sub/min passes
    std::uint64_t perm_cycles = 0;
};

// Per-run FW cost. Blocks beyond one unit (a stalled top boundary graph)
// fall back to sequential unit-sized sweeps per pivot.
FwSplit fw_run_cost(std::uint32_t n, const DeviceConfig& cfg) {
    FwSplit split;
    if (n == 0) return split;
    std::uint64_t sweeps = 0;
    if (n > 1) {
        const std::uint64_t blocks_per_side =
            (std::uint64_t(n) - 1 + cfg.unit_rows - 1) / cfg.unit_rows;
        sweeps = blocks_per_side * blocks_per_side;
    }
    const std::uint64_t pass =
        bit_serial_cost(BitSerialOp::Add, cfg) + bit_serial_cost(BitSerialOp::SubMin, cfg);
    split.compute_cycles = std::uint64_t(n) * sweeps * pass;
    split.perm_cycles = std::uint64_t(n) * permutation_unit_cost(n, cfg);
    return split;
}

struct MpSplit {
    std::uint64_t add_cycles = 0;
    std::uint64_t comp_cycles = 0;
};

// Two-stage merge; each stage one add plus one reduction per row, chunked
// when the reduction width exceeds the unit.
MpSplit mp_run_cost(std::uint64_t rows, std::uint32_t inner1, std::uint32_t inner2,
                    const DeviceConfig& cfg) {
    MpSplit split;
    if (rows == 0) return split;
    const std::uint64_t add = bit_serial_cost(BitSerialOp::Add, cfg);
    for (std::uint32_t inner : {inner1, inner2}) {
        if (inner == 0) continue;
        const std::uint64_t chunks = (std::uint64_t(inner) + cfg.unit_cols - 1) / cfg.unit_cols;
        const std::uint32_t width = std::min(inner, cfg.unit_cols);
        split.add_cycles += rows * chunks * add;
        split.comp_cycles += rows * chunks * comparator_tree_cycles(width, cfg);
        if (chunks > 1) split.comp_cycles += rows * comparator_tree_cycles(chunks, cfg);
    }
    return split;
}

// Round-robin makespan: event i runs on tile i % tiles; the step ends when
// the most loaded tile drains.
std::uint64_t makespan(const std::vector<std::uint64_t>& costs, std::uint32_t tiles) {
    if (costs.empty()) return 0;
    std::vector<std::uint64_t> load(std::min<std::size_t>(tiles, costs.size()), 0);
    for (std::size_t i = 0; i < costs.size(); ++i) load[i % load.size()] += costs[i];
    return *std::max_element(load.begin(), load.end());
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

SimReport simulate_dataflow(const ExecutionTrace& trace, const DeviceConfig& cfg,
                            const std::vector<std::string>& overridden_fields) {
    cfg.validate();
    if (trace.levels.empty()) throw std::invalid_argument("trace has no levels");
    for (const auto& shape : trace.levels)
        if (shape.comp_sizes.size() != shape.comp_boundaries.size() ||
            shape.comp_sizes.size() != shape.comp_edges.size())
            throw std::invalid_argument("trace level shape is inconsistent");

    SimReport r;
    r.version = kVersion;
    r.config = cfg;
    r.config_hash = device_config_hash(cfg);
    for (const auto& field : placeholder_fields())
        if (std::find(overridden_fields.begin(), overridden_fields.end(), field) ==
            overridden_fields.end())
            r.placeholders_in_effect.push_back(field);
    r.n = trace.n;
    r.m = trace.m;
    r.tile_limit = trace.tile_limit;
    r.stalled = trace.stalled;
    r.num_levels = std::uint32_t(trace.levels.size());

    const std::int32_t top = std::int32_t(trace.levels.size()) - 1;

    // ---- compute blocks, grouped into scheduling steps ----
    // Step order: seed (level -1 if present), then levels top..0.
    std::map<std::int32_t, std::vector<std::uint64_t>> fw_local, fw_reinject;
    for (const auto& ev : trace.fw) {
        const FwSplit split = fw_run_cost(ev.n, cfg);
        r.fw_die.cycles += split.compute_cycles;
        r.permutation.cycles += split.perm_cycles;
        r.fw_die.cell_writes += ev.updates;
        (ev.phase == FwEvent::Phase::Reinject ? fw_reinject : fw_local)[ev.level].push_back(
            split.compute_cycles + split.perm_cycles);
        // Stage 2: result rows streamed back.
        r.stages[1].bytes += kWordBytes * std::uint64_t(ev.n) * ev.n;
    }
    std::map<std::int32_t, std::vector<std::uint64_t>> mp_by_level;
    for (const auto& ev : trace.mp) {
        const MpSplit split = mp_run_cost(ev.rows, ev.inner1, ev.inner2, cfg);
        r.mp_die.cycles += split.add_cycles;
        r.comparator.cycles += split.comp_cycles;
        r.mp_die.cell_writes += ev.writes;
        mp_by_level[ev.level].push_back(split.add_cycles + split.comp_cycles);
        const std::uint64_t operand_bytes =
            kWordBytes * (std::uint64_t(ev.rows) * ev.inner1 +
                          std::uint64_t(ev.inner1) * ev.inner2 +
                          std::uint64_t(ev.inner2) * ev.cols);
        // Stage 4 during recursion, stage 7 for the final merges.
        r.stages[ev.level == 0 ? 6 : 3].bytes += operand_bytes;
    }

    auto step_levels = [&]() {
        std::vector<std::int32_t> order;
        if (fw_local.count(-1)) order.push_back(-1);
        for (std::int32_t l = top; l >= 0; --l) order.push_back(l);
        return order;
    }();

    // Dense bytes of the blocks a step computes on; this is what stage 3(ii)
    // prefetches while the previous step is still computing.
    auto step_block_bytes = [&](std::int32_t level) -> std::uint64_t {
        if (level < 0) {
            const auto& t = trace.levels[top];
            return kWordBytes * std::uint64_t(t.bg_n) * t.bg_n;
        }
        std::uint64_t bytes = 0;
        for (auto s : trace.levels[level].comp_sizes)
            bytes += kWordBytes * std::uint64_t(s) * s;
        return bytes;
    };

    for (std::size_t i = 0; i < step_levels.size(); ++i) {
        const std::int32_t level = step_levels[i];
        StepCost step;
        step.level = level;
        step.fw_cycles = makespan(fw_local[level], cfg.fw_tiles) +
                         makespan(fw_reinject[level], cfg.fw_tiles);
        step.mp_cycles = makespan(mp_by_level[level], cfg.mp_tiles);
        step.compute_seconds = double(step.fw_cycles + step.mp_cycles) * cfg.clock_ns * 1e-9;
        if (i > 0) {
            const std::uint64_t pf = step_block_bytes(level);
            r.stages[2].bytes += pf;
            step.prefetch_seconds = transfer_seconds(pf, std::min(cfg.ucie_gbps, cfg.hbm_gbps));
        }
        r.steps.push_back(step);
    }
    // Prefetch of step i+1 hides under compute of step i.
    if (cfg.pipeline_prefetch) {
        for (std::size_t i = 0; i + 1 < r.steps.size(); ++i)
            r.steps[i + 1].overlapped_seconds =
                std::min(r.steps[i].compute_seconds, r.steps[i + 1].prefetch_seconds);
    }

    // ---- remaining stage bytes ----
    // Stage 1: level-0 component CSR stream-in.
    {
        const auto& l0 = trace.levels[0];
        for (std::size_t c = 0; c < l0.comp_sizes.size(); ++c)
            r.stages[0].bytes += binary_csr_bytes(l0.comp_sizes[c], l0.comp_edges[c]);
    }
    // Stage 3(i): boundary graph construction.
    for (const auto& shape : trace.levels)
        if (shape.bg_n > 0) r.stages[2].bytes += binary_csr_bytes(shape.bg_n, shape.bg_m);
    // Stage 5: boundary injection sync, per level whose boundary matrix is
    // non-empty.
    for (const auto& shape : trace.levels) {
        if (shape.bg_n == 0) continue;
        for (auto bc : shape.comp_boundaries)
            r.stages[4].bytes += kWordBytes * std::uint64_t(bc) * bc;
    }
    // Stage 6: dense boundary matrices plus CSR result write-back.
    for (const auto& shape : trace.levels)
        r.stages[5].bytes += kWordBytes * std::uint64_t(shape.bg_n) * shape.bg_n;
    {
        const auto& l0 = trace.levels[0];
        for (std::size_t c = 0; c < trace.result_entries.size(); ++c)
            r.stages[5].bytes += binary_csr_bytes(l0.comp_sizes[c], trace.result_entries[c]);
        for (const auto& ev : trace.mp)
            if (ev.level == 0)
                r.stages[5].bytes +=
                    binary_csr_bytes(std::uint64_t(ev.rows) + ev.cols, ev.writes);
    }

    // ---- per-stage timing and energy ----
    const double ucie_path = std::min(cfg.ucie_gbps, cfg.hbm_gbps);
    const double ucie_pj = cfg.ucie_pj_per_byte + cfg.hbm_pj_per_byte;
    const struct {
        double gbps;
        double pj_per_byte;
    } tier[7] = {
        {cfg.fenand_gbps, cfg.fenand_pj_per_byte}, // 1
        {ucie_path, ucie_pj},                      // 2
        {ucie_path, ucie_pj},                      // 3
        {ucie_path, ucie_pj},                      // 4
        {ucie_path, ucie_pj},                      // 5
        {cfg.fenand_gbps, cfg.fenand_pj_per_byte}, // 6
        {cfg.fenand_gbps, cfg.fenand_pj_per_byte}, // 7
    };
    for (int s = 0; s < 7; ++s) {
        r.stages[s].seconds = transfer_seconds(r.stages[s].bytes, tier[s].gbps);
        r.stages[s].cycles = r.stages[s].seconds / (cfg.clock_ns * 1e-9);
        r.stages[s].energy_j = double(r.stages[s].bytes) * tier[s].pj_per_byte * 1e-12;
        r.transfer_seconds += r.stages[s].seconds;
        r.total_bytes += r.stages[s].bytes;
    }
    r.fenand_bytes_written = r.stages[5].bytes;

    // ---- totals ----
    auto finish_block = [&](BlockCost& b, double energy) {
        b.seconds = double(b.cycles) * cfg.clock_ns * 1e-9;
        b.energy_j = energy;
    };
    finish_block(r.fw_die,
                 double(r.fw_die.cell_writes) * cfg.bits * cfg.write_energy_pj * 1e-12);
    finish_block(r.mp_die,
                 double(r.mp_die.cell_writes) * cfg.bits * cfg.write_energy_pj * 1e-12);
    finish_block(r.permutation, 0.0);
    finish_block(r.comparator, 0.0);

    r.compute_cycles =
        r.fw_die.cycles + r.mp_die.cycles + r.permutation.cycles + r.comparator.cycles;
    for (const auto& step : r.steps) {
        r.compute_seconds += step.compute_seconds;
        r.overlapped_seconds += step.overlapped_seconds;
    }
    r.total_cell_writes = r.fw_die.cell_writes + r.mp_die.cell_writes;
    r.total_energy_j = r.fw_die.energy_j + r.mp_die.energy_j;
    for (int s = 0; s < 7; ++s) r.total_energy_j += r.stages[s].energy_j;
    r.total_seconds = r.compute_seconds + r.transfer_seconds - r.overlapped_seconds;
    return r;
}

std::string report_json(const SimReport& r) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "sim_report";
    j["version"] = r.version;
    j["header"] = {{"config_hash", r.config_hash},
                   {"placeholders_in_effect", r.placeholders_in_effect},
                   {"clock_ns", r.config.clock_ns},
                   {"write_pulse_cycles", r.config.write_pulse_cycles()},
                   {"write_energy_pj", r.config.write_energy_pj},
                   {"ucie_gbps", r.config.ucie_gbps},
                   {"fw_unit_area_um2", r.config.fw_unit_area_um2},
                   {"mp_unit_area_um2", r.config.mp_unit_area_um2}};
    {
        nlohmann::json cfg;
        std::istringstream ss(serialize_device_config(r.config));
        std::string line;
        while (std::getline(ss, line)) {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos) cfg[line.substr(0, eq)] = line.substr(eq + 3);
        }
        j["config"] = cfg;
    }
    j["input"] = {{"n", r.n}, {"m", r.m}, {"tile_limit", r.tile_limit},
                  {"stalled", r.stalled}, {"levels", r.num_levels}};
    nlohmann::json stages = nlohmann::json::array();
    for (int s = 0; s < 7; ++s)
        stages.push_back({{"stage", s + 1},
                          {"bytes", r.stages[s].bytes},
                          {"seconds", r.stages[s].seconds},
                          {"cycles", r.stages[s].cycles},
                          {"energy_j", r.stages[s].energy_j}});
    j["stages"] = stages;
    auto block = [](const BlockCost& b) {
        return nlohmann::json{{"cycles", b.cycles},
                              {"seconds", b.seconds},
                              {"energy_j", b.energy_j},
                              {"cell_writes", b.cell_writes}};
    };
    j["blocks"] = {{"fw_die", block(r.fw_die)},
                   {"mp_die", block(r.mp_die)},
                   {"permutation", block(r.permutation)},
                   {"comparator", block(r.comparator)},
                   {"interconnect",
                    {{"bytes", r.total_bytes},
                     {"seconds", r.transfer_seconds},
                     {"energy_j", r.total_energy_j - r.fw_die.energy_j - r.mp_die.energy_j}}}};
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : r.steps)
        steps.push_back({{"level", s.level},
                         {"fw_cycles", s.fw_cycles},
                         {"mp_cycles", s.mp_cycles},
                         {"compute_seconds", s.compute_seconds},
                         {"prefetch_seconds", s.prefetch_seconds},
                         {"overlapped_seconds", s.overlapped_seconds}});
    j["steps"] = steps;
    j["totals"] = {{"compute_cycles", r.compute_cycles},
                   {"compute_seconds", r.compute_seconds},
                   {"transfer_seconds", r.transfer_seconds},
                   {"overlapped_seconds", r.overlapped_seconds},
                   {"total_seconds", r.total_seconds},
                   {"total_energy_j", r.total_energy_j},
                   {"total_bytes", r.total_bytes},
                   {"cell_writes", r.total_cell_writes},
                   {"fenand_bytes_written", r.fenand_bytes_written}};
    nlohmann::json row;
    for (const auto& [k, v] : report_flat(r)) row[k] = v;
    j["table_row"] = row;
    return j.dump(2) + "\n";
}

std::string report_table(const SimReport& r) {
    std::ostringstream out;
    out << r.version << "  config " << r.config_hash << "\n";
    if (!r.placeholders_in_effect.empty()) {
        out << "placeholder values in effect:";
        for (const auto& f : r.placeholders_in_effect) out << ' ' << f;
        out << "\n";
    }
    out << "clock_ns=" << r.config.clock_ns
        << "  write_pulse_cycles=" << r.config.write_pulse_cycles()
        << "  write_energy_pj=" << r.config.write_energy_pj
        << "  ucie_gbps=" << r.config.ucie_gbps << "\n";
    out << "input: n=" << r.n << " m=" << r.m << " tile_limit=" << r.tile_limit
        << " levels=" << r.num_levels << (r.stalled ? " (stalled)" : "") << "\n\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-8s %16s %14s %14s\n", "stage", "bytes", "seconds",
                  "energy_j");
    out << line;
    for (int s = 0; s < 7; ++s) {
        std::snprintf(line, sizeof(line), "%-8d %16llu %14.6e %14.6e\n", s + 1,
                      (unsigned long long)r.stages[s].bytes, r.stages[s].seconds,
                      r.stages[s].energy_j);
        out << line;
    }
    out << "\n";
    std::snprintf(line, sizeof(line), "%-12s %16s %14s %14s %12s\n", "block", "cycles", "seconds",
                  "energy_j", "writes");
    out << line;
    auto put = [&](const char* name, const BlockCost& b) {
        std::snprintf(line, sizeof(line), "%-12s %16llu %14.6e %14.6e %12llu\n", name,
                      (unsigned long long)b.cycles, b.seconds, b.energy_j,
                      (unsigned long long)b.cell_writes);
        out << line;
    };
    put("fw_die", r.fw_die);
    put("mp_die", r.mp_die);
    put("permutation", r.permutation);
    put("comparator", r.comparator);
    out << "\ntotals: compute_cycles=" << r.compute_cycles << " compute_s=" << fmt(r.compute_seconds)
        << " transfer_s=" << fmt(r.transfer_seconds) << " overlap_s=" << fmt(r.overlapped_seconds)
        << " total_s=" << fmt(r.total_seconds) << " energy_j=" << fmt(r.total_energy_j)
        << " bytes=" << r.total_bytes << " cell_writes=" << r.total_cell_writes
        << " fenand_written=" << r.fenand_bytes_written << "\n";
    return out.str();
}

std::vector<std::pair<std::string, std::string>> report_flat(const SimReport& r) {
    std::vector<std::pair<std::string, std::string>> row;
    row.emplace_back("n", std::to_string(r.n));
    row.emplace_back("m", std::to_string(r.m));
    row.emplace_back("tile_limit", std::to_string(r.tile_limit));
    row.emplace_back("levels", std::to_string(r.num_levels));
    row.emplace_back("stalled", r.stalled ? "1" : "0");
    row.emplace_back("compute_cycles", std::to_string(r.compute_cycles));
    row.emplace_back("fw_cycles", std::to_string(r.fw_die.cycles));
    row.emplace_back("mp_cycles", std::to_string(r.mp_die.cycles));
    row.emplace_back("perm_cycles", std::to_string(r.permutation.cycles));
    row.emplace_back("comparator_cycles", std::to_string(r.comparator.cycles));
    row.emplace_back("compute_seconds", fmt(r.compute_seconds));
    row.emplace_back("transfer_seconds", fmt(r.transfer_seconds));
    row.emplace_back("overlapped_seconds", fmt(r.overlapped_seconds));
    row.emplace_back("total_seconds", fmt(r.total_seconds));
    row.emplace_back("total_energy_j", fmt(r.total_energy_j));
    for (int s = 0; s < 7; ++s)
        row.emplace_back("bytes_stage" + std::to_string(s + 1),
                         std::to_string(r.stages[s].bytes));
    row.emplace_back("total_bytes", std::to_string(r.total_bytes));
    row.emplace_back("cell_writes", std::to_string(r.total_cell_writes));
    row.emplace_back("fenand_bytes_written", std::to_string(r.fenand_bytes_written));
    row.emplace_back("config_hash", r.config_hash);
    row.emplace_back("version", r.version);
    return row;
}

} // namespace sim
} // namespace rapid
