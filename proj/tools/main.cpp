#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rapid/dataflow.hpp"
#include "rapid/device_config.hpp"
#include "rapid/error.hpp"
#include "rapid/generators.hpp"
#include "rapid/graph_io.hpp"
#include "rapid/solver.hpp"
#include "rapid/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct DeviceSetup {
    rapid::sim::DeviceConfig config;
    std::vector<std::string> overridden;
    std::string source = "builtin defaults";
};

DeviceSetup resolve_device_config(const std::string& flag_path) {
    DeviceSetup setup;
    std::string path = flag_path;
    if (path.empty()) {
        if (const char* env = std::getenv("RAPID_DEVICE_CONFIG")) path = env;
    }
    if (!path.empty()) {
        auto [cfg, seen] = rapid::sim::load_device_config(path);
        setup.config = cfg;
        setup.overridden = seen;
        setup.source = path;
    }
    setup.config.validate();
    return setup;
}

rapid::Graph generate_graph(const std::string& topology, std::uint32_t n, double degree,
                            std::uint32_t k, double p, std::uint64_t seed) {
    if (topology == "er") return rapid::gen_er(n, degree, seed);
    if (topology == "nws") return rapid::gen_nws(n, k, p, seed);
    throw std::invalid_argument("unknown topology: " + topology);
}

// Round to the nearest even ring size >= 2 so a degree axis drives both
// generators.
std::uint32_t nws_k_for_degree(double degree) {
    auto k = std::uint32_t(std::llround(degree / 2.0) * 2);
    return std::max<std::uint32_t>(2, k);
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw rapid::IoError("cannot write " + path.string());
    out << content;
    if (!out) throw rapid::IoError("write failed: " + path.string());
}

json solve_summary(const rapid::solver::ApspResult& result, const std::string& input_desc,
                   double wall_ms, const rapid::solver::VerifyReport* verify) {
    const auto& h = result.hierarchy;
    json levels = json::array();
    for (std::size_t l = 0; l < h.levels.size(); ++l) {
        const auto& lvl = h.levels[l];
        std::uint64_t boundary_total = 0;
        for (const auto& comp : lvl.components) boundary_total += comp.boundary_count;
        levels.push_back({{"level", l},
                          {"components", lvl.components.size()},
                          {"boundary_vertices", boundary_total},
                          {"boundary_graph_n", lvl.boundary.graph.num_vertices()},
                          {"boundary_graph_m", lvl.boundary.graph.num_edges()}});
    }
    json j;
    j["schema_version"] = rapid::kSchemaVersion;
    j["kind"] = "solve_summary";
    j["version"] = rapid::kVersion;
    j["input"] = {{"description", input_desc},
                  {"n", result.graph.num_vertices()},
                  {"m", result.graph.num_edges()}};
    j["config"] = {{"tile_limit", result.config.tile_limit},
                   {"workers", result.config.workers},
                   {"imbalance", result.config.imbalance},
                   {"materialize_cross", result.config.materialize_cross}};
    j["hierarchy"] = {{"levels", levels}, {"stalled", h.stalled}};
    j["wall_time_ms"] = wall_ms;
    if (verify) {
        j["verify"] = {{"sources_checked", verify->sources_checked},
                       {"mismatches", verify->mismatches.size()}};
    }
    json row;
    row["n"] = std::to_string(result.graph.num_vertices());
    row["m"] = std::to_string(result.graph.num_edges());
    row["tile_limit"] = std::to_string(result.config.tile_limit);
    row["levels"] = std::to_string(h.levels.size());
    row["stalled"] = h.stalled ? "1" : "0";
    row["version"] = rapid::kVersion;
    j["table_row"] = row;
    return j;
}

int cmd_generate(const std::string& topology, std::uint32_t n, double degree, std::uint32_t k,
                 double p, std::uint64_t seed, const std::string& out,
                 const std::string& format) {
    rapid::Graph g = generate_graph(topology, n, degree, k, p, seed);
    if (format == "csr")
        rapid::save_binary_csr_file(g, out);
    else
        rapid::save_edge_list_file(g, out);
    std::cout << "generated " << topology << " n=" << g.num_vertices() << " m=" << g.num_edges()
              << " -> " << out << "\n";
    return kExitOk;
}

int cmd_solve(const std::string& input, const std::string& out_dir,
              rapid::solver::SolverConfig cfg, const std::string& assignment_path,
              const std::string& emit_assignment, bool verify, std::uint32_t sample,
              std::uint64_t verify_seed) {
    rapid::Graph g = rapid::load_graph_file(input);
    if (!assignment_path.empty())
        cfg.level0_assignment = rapid::load_assignment_file(assignment_path, g.num_vertices());

    const auto start = std::chrono::steady_clock::now();
    rapid::solver::ApspResult result = rapid::solver::solve_apsp(g, cfg);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    rapid::solver::VerifyReport verify_report;
    bool verified = false;
    if (verify) {
        verify_report = rapid::solver::verify_against_oracle(g, result, sample, verify_seed);
        verified = true;
    }

    fs::create_directories(out_dir);
    rapid::solver::save_result(result, out_dir, input);
    const json summary =
        solve_summary(result, input, wall_ms, verified ? &verify_report : nullptr);
    write_text_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
    if (!emit_assignment.empty())
        rapid::save_assignment_file(result.hierarchy.levels[0].assignment, emit_assignment);

    std::cout << "solved n=" << g.num_vertices() << " levels=" << result.hierarchy.levels.size()
              << (result.hierarchy.stalled ? " (stalled)" : "") << " wall_ms=" << wall_ms << "\n";
    if (verified) {
        if (!verify_report.passed()) {
            std::cerr << "verification FAILED: " << verify_report.mismatches.size()
                      << " mismatches from " << verify_report.sources_checked << " sources\n";
            for (std::size_t i = 0; i < std::min<std::size_t>(verify_report.mismatches.size(), 10);
                 ++i) {
                const auto& mm = verify_report.mismatches[i];
                std::cerr << "  (" << mm.source << "," << mm.target << ") expected " << mm.expected
                          << " got " << mm.actual << "\n";
            }
            return kExitVerifyFailed;
        }
        std::cout << "verified " << verify_report.sources_checked << " sources, no mismatches\n";
    }
    return kExitOk;
}

struct SweepPoint {
    std::string topology;
    std::uint32_t n;
    double degree;
};

int cmd_simulate(const std::string& input, std::string topology, std::uint32_t n, double degree,
                 std::uint32_t k_ring, double p, std::uint64_t seed, bool seed_set,
                 const std::vector<std::uint32_t>& sizes, const std::vector<double>& degrees,
                 const std::vector<std::string>& topologies, const std::string& out_dir,
                 rapid::solver::SolverConfig solver_cfg, const std::string& device_path) {
    const DeviceSetup device = resolve_device_config(device_path);
    const bool generated = input.empty();
    if (!generated &&
        (!sizes.empty() || !degrees.empty() || !topologies.empty() || !topology.empty()))
        throw std::invalid_argument("exactly one input source: --input excludes generator flags");
    if (generated && !seed_set)
        throw std::invalid_argument("generator input requires --seed");

    std::vector<SweepPoint> points;
    if (generated) {
        if (topology.empty()) topology = "er";
        std::vector<std::string> topos = topologies.empty()
                                             ? std::vector<std::string>{topology}
                                             : topologies;
        std::vector<std::uint32_t> ns = sizes.empty() ? std::vector<std::uint32_t>{n} : sizes;
        std::vector<double> degs = degrees.empty() ? std::vector<double>{degree} : degrees;
        for (const auto& t : topos)
            for (auto nn : ns)
                for (auto d : degs) points.push_back({t, nn, d});
    } else {
        points.push_back({"file", 0, 0.0});
    }

    fs::create_directories(out_dir);
    std::ostringstream csv;
    bool header_done = false;

    for (const auto& pt : points) {
        rapid::Graph g;
        std::string desc;
        if (generated) {
            const std::uint32_t kk = pt.topology == "nws" && degrees.empty() && sizes.empty()
                                         ? k_ring
                                         : nws_k_for_degree(pt.degree);
            g = generate_graph(pt.topology, pt.n, pt.degree, kk, p, seed);
            std::ostringstream d;
            d << pt.topology << " n=" << pt.n << " degree=" << pt.degree << " seed=" << seed;
            desc = d.str();
        } else {
            g = rapid::load_graph_file(input);
            desc = input;
        }

        rapid::solver::ApspResult result = rapid::solver::solve_apsp(g, solver_cfg);
        rapid::sim::SimReport report =
            rapid::sim::simulate_dataflow(result.trace, device.config, device.overridden);

        std::ostringstream stem;
        if (generated)
            stem << "sim_" << pt.topology << "_n" << pt.n << "_d" << pt.degree;
        else
            stem << "sim_" << fs::path(input).stem().string();
        json j = json::parse(rapid::sim::report_json(report));
        j["input"]["description"] = desc;
        if (generated) {
            j["table_row"]["topology"] = pt.topology;
            j["table_row"]["degree"] = std::to_string(pt.degree);
            j["table_row"]["seed"] = std::to_string(seed);
        }
        write_text_file(fs::path(out_dir) / (stem.str() + ".json"), j.dump(2) + "\n");
        write_text_file(fs::path(out_dir) / (stem.str() + ".txt"),
                        rapid::sim::report_table(report));

        auto flat = rapid::sim::report_flat(report);
        if (generated) {
            flat.insert(flat.begin(), {"seed", std::to_string(seed)});
            flat.insert(flat.begin(), {"degree", std::to_string(pt.degree)});
            flat.insert(flat.begin(), {"topology", pt.topology});
        } else {
            flat.insert(flat.begin(), {"input", desc});
        }
        if (!header_done) {
            for (std::size_t i = 0; i < flat.size(); ++i)
                csv << (i ? "," : "") << flat[i].first;
            csv << "\n";
            header_done = true;
        }
        for (std::size_t i = 0; i < flat.size(); ++i) csv << (i ? "," : "") << flat[i].second;
        csv << "\n";
        std::cout << stem.str() << ": total_s=" << report.total_seconds
                  << " energy_j=" << report.total_energy_j
                  << " compute_cycles=" << report.compute_cycles << "\n";
    }
    write_text_file(fs::path(out_dir) / "sweep.csv", csv.str());
    std::cout << "device config: " << device.source << " (hash "
              << rapid::sim::device_config_hash(device.config) << ")\n";
    return kExitOk;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_csv,
               const std::string& out_md) {
    std::vector<std::pair<std::string, json>> rows;
    std::set<std::string> keys;
    int schema = -1;
    for (const auto& path : inputs) {
        std::ifstream f(path);
        if (!f) throw rapid::IoError("cannot open " + path);
        json j = json::parse(f, nullptr, true, true);
        if (!j.contains("schema_version") || !j.contains("table_row"))
            throw rapid::IoError(path + ": not a report/summary JSON (missing table_row)");
        const int s = j["schema_version"].get<int>();
        if (schema == -1)
            schema = s;
        else if (schema != s)
            throw rapid::IoError(path + ": schema version mismatch (" + std::to_string(s) +
                                 " vs " + std::to_string(schema) + ")");
        rows.emplace_back(path, j["table_row"]);
        for (auto& [k, v] : j["table_row"].items()) keys.insert(k);
    }

    std::vector<std::string> columns{"file"};
    columns.insert(columns.end(), keys.begin(), keys.end());

    std::ostringstream csv;
    for (std::size_t i = 0; i < columns.size(); ++i) csv << (i ? "," : "") << columns[i];
    csv << "\n";
    for (const auto& [file, row] : rows) {
        csv << file;
        for (std::size_t i = 1; i < columns.size(); ++i) {
            csv << ",";
            if (row.contains(columns[i])) csv << row[columns[i]].get<std::string>();
        }
        csv << "\n";
    }
    if (out_csv.empty())
        std::cout << csv.str();
    else
        write_text_file(out_csv, csv.str());

    if (!out_md.empty()) {
        std::ostringstream md;
        md << "|";
        for (const auto& c : columns) md << " " << c << " |";
        md << "\n|";
        for (std::size_t i = 0; i < columns.size(); ++i) md << " --- |";
        md << "\n";
        for (const auto& [file, row] : rows) {
            md << "| " << file << " |";
            for (std::size_t i = 1; i < columns.size(); ++i) {
                md << " ";
                if (row.contains(columns[i])) md << row[columns[i]].get<std::string>();
                md << " |";
            }
            md << "\n";
        }
        write_text_file(out_md, md.str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact all-pairs shortest paths with a processing-in-memory cost model"};
    app.set_version_flag("--version", rapid::kVersion);
    app.require_subcommand(1);

    // --- generate ---
    auto* gen = app.add_subcommand("generate", "synthesize a graph file");
    gen->require_subcommand(1);
    std::uint32_t g_n = 1000;
    double g_degree = 8.0, g_p = 0.1;
    std::uint32_t g_k = 10;
    std::uint64_t g_seed = 0;
    std::string g_out, g_format = "edgelist";

    auto* gen_er_cmd = gen->add_subcommand("er", "Erdos-Renyi");
    gen_er_cmd->add_option("--n", g_n, "vertex count")->required();
    gen_er_cmd->add_option("--degree", g_degree, "mean out-degree")->required();
    gen_er_cmd->add_option("--seed", g_seed, "generator seed")->required();
    gen_er_cmd->add_option("--out", g_out, "output file")->required();
    gen_er_cmd->add_option("--format", g_format, "edgelist|csr")
        ->check(CLI::IsMember({"edgelist", "csr"}));

    auto* gen_nws_cmd = gen->add_subcommand("nws", "Newman-Watts-Strogatz");
    gen_nws_cmd->add_option("--n", g_n, "vertex count")->required();
    gen_nws_cmd->add_option("--k", g_k, "ring neighbors (even)")->required();
    gen_nws_cmd->add_option("--p", g_p, "shortcut probability")->required();
    gen_nws_cmd->add_option("--seed", g_seed, "generator seed")->required();
    gen_nws_cmd->add_option("--out", g_out, "output file")->required();
    gen_nws_cmd->add_option("--format", g_format, "edgelist|csr")
        ->check(CLI::IsMember({"edgelist", "csr"}));

    // --- solve ---
    auto* solve = app.add_subcommand("solve", "compute exact APSP");
    std::string s_input, s_out, s_assignment;
    rapid::solver::SolverConfig s_cfg;
    bool s_verify = false;
    std::uint32_t s_sample = 16;
    std::uint64_t s_verify_seed = 1;
    solve->add_option("--input", s_input, "graph file (edge list or binary CSR)")->required();
    solve->add_option("--out", s_out, "result directory")->required();
    solve->add_option("--tile-limit", s_cfg.tile_limit, "max component size")
        ->check(CLI::Range(2u, 1u << 20));
    solve->add_option("--workers", s_cfg.workers, "worker threads")->check(CLI::Range(1u, 256u));
    solve->add_option("--imbalance", s_cfg.imbalance, "partition imbalance factor");
    solve->add_option("--assignment", s_assignment, "import a level-0 assignment file");
    std::string s_emit_assignment;
    solve->add_option("--emit-assignment", s_emit_assignment,
                      "write the level-0 assignment (one part id per line)");
    solve->add_flag("--materialize-cross", s_cfg.materialize_cross,
                    "store all cross-component blocks");
    solve->add_flag("--verify", s_verify, "check against a Dijkstra oracle");
    solve->add_option("--sample", s_sample, "oracle sources to sample");
    solve->add_option("--verify-seed", s_verify_seed, "oracle sampling seed");

    // --- simulate ---
    auto* simc = app.add_subcommand("simulate", "solve and model the hardware cost");
    std::string m_input, m_topology, m_out, m_device;
    std::uint32_t m_n = 1024, m_k = 10;
    double m_degree = 8.0, m_p = 0.1;
    std::uint64_t m_seed = 0;
    std::vector<std::uint32_t> m_sizes;
    std::vector<double> m_degrees;
    std::vector<std::string> m_topologies;
    rapid::solver::SolverConfig m_cfg;
    simc->add_option("--input", m_input, "graph file; excludes generator flags");
    simc->add_option("--topology", m_topology, "er|nws")
        ->check(CLI::IsMember({"er", "nws"}));
    simc->add_option("--n", m_n, "vertex count");
    simc->add_option("--degree", m_degree, "mean degree");
    simc->add_option("--k", m_k, "nws ring neighbors");
    simc->add_option("--p", m_p, "nws shortcut probability");
    auto* seed_opt = simc->add_option("--seed", m_seed, "generator seed");
    simc->add_option("--sizes", m_sizes, "sweep axis: vertex counts")->delimiter(',');
    simc->add_option("--degrees", m_degrees, "sweep axis: degrees")->delimiter(',');
    simc->add_option("--topologies", m_topologies, "sweep axis: topologies")->delimiter(',');
    simc->add_option("--out", m_out, "output directory")->required();
    simc->add_option("--tile-limit", m_cfg.tile_limit, "max component size")
        ->check(CLI::Range(2u, 1u << 20));
    simc->add_option("--workers", m_cfg.workers, "worker threads")->check(CLI::Range(1u, 256u));
    simc->add_option("--device-config", m_device,
                     "device parameter file (fallback: RAPID_DEVICE_CONFIG)");

    // --- report ---
    auto* rep = app.add_subcommand("report", "merge report/summary JSONs into one table");
    std::vector<std::string> r_inputs;
    std::string r_csv, r_md;
    rep->add_option("inputs", r_inputs, "report/summary JSON files");
    rep->add_option("--out", r_csv, "CSV output (default: stdout)");
    rep->add_option("--markdown", r_md, "markdown table output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen_er_cmd->parsed())
            return cmd_generate("er", g_n, g_degree, g_k, g_p, g_seed, g_out, g_format);
        if (gen_nws_cmd->parsed())
            return cmd_generate("nws", g_n, g_degree, g_k, g_p, g_seed, g_out, g_format);
        if (solve->parsed())
            return cmd_solve(s_input, s_out, s_cfg, s_assignment, s_emit_assignment, s_verify,
                             s_sample, s_verify_seed);
        if (simc->parsed())
            return cmd_simulate(m_input, m_topology, m_n, m_degree, m_k, m_p, m_seed,
                                seed_opt->count() > 0, m_sizes, m_degrees, m_topologies, m_out,
                                m_cfg, m_device);
        if (rep->parsed()) return cmd_report(r_inputs, r_csv, r_md);
    } catch (const rapid::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const rapid::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
