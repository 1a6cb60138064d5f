#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli = RAPIDGRAPH_CLI;

int run(const std::string& args) {
    const std::string cmd = std::string(cli) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& sub) const { return (path / sub).string(); }
};

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream f(p);
    REQUIRE(f);
    std::string line;
    while (std::getline(f, line)) {
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST_CASE("generate is deterministic and format-selectable") {
    TempDir dir("rapid_cli_gen");
    CHECK(run("generate er --n 200 --degree 6 --seed 7 --out " + (dir / "a.el")) == 0);
    CHECK(run("generate er --n 200 --degree 6 --seed 7 --out " + (dir / "b.el")) == 0);
    CHECK(slurp(dir.path / "a.el") == slurp(dir.path / "b.el"));

    CHECK(run("generate nws --n 100 --k 6 --p 0.1 --seed 3 --out " + (dir / "c.csr") +
              " --format csr") == 0);
    CHECK(slurp(dir.path / "c.csr").substr(0, 6) == "RGCSR1");
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("generate er --n 100 --degree 4 --out /tmp/x.el") == 2); // seed mandatory
    CHECK(run("frobnicate") == 2);
    CHECK(run("solve") == 2);
    CHECK(run("generate er --n 10 --degree 40 --seed 1 --out /tmp/x.el") == 2); // degree >= n
}

TEST_CASE("io errors exit 3") {
    TempDir dir("rapid_cli_io");
    CHECK(run("solve --input " + (dir / "missing.el") + " --out " + (dir / "res")) == 3);
    {
        std::ofstream f(dir / "garbage.el");
        f << "not a graph\n";
    }
    CHECK(run("solve --input " + (dir / "garbage.el") + " --out " + (dir / "res")) == 3);
}

TEST_CASE("solve writes a result directory and verifies") {
    TempDir dir("rapid_cli_solve");
    REQUIRE(run("generate nws --n 90 --k 6 --p 0.1 --seed 11 --out " + (dir / "g.el")) == 0);
    CHECK(run("solve --input " + (dir / "g.el") + " --out " + (dir / "res") +
              " --tile-limit 16 --verify --sample 20") == 0);
    CHECK(fs::exists(dir.path / "res/manifest.json"));
    CHECK(fs::exists(dir.path / "res/summary.json"));
    CHECK(fs::exists(dir.path / "res/blocks"));

    const auto manifest = nlohmann::json::parse(slurp(dir.path / "res/manifest.json"));
    CHECK(manifest["kind"] == "apsp_manifest");
    CHECK(manifest["input"]["n"] == 90);
    const auto summary = nlohmann::json::parse(slurp(dir.path / "res/summary.json"));
    CHECK(summary["verify"]["mismatches"] == 0);

    // Identical flags give a byte-identical manifest.
    CHECK(run("solve --input " + (dir / "g.el") + " --out " + (dir / "res2") +
              " --tile-limit 16") == 0);
    CHECK(slurp(dir.path / "res/manifest.json") == slurp(dir.path / "res2/manifest.json"));
}

TEST_CASE("solve round-trips assignments through the exchange format") {
    TempDir dir("rapid_cli_assign");
    REQUIRE(run("generate er --n 40 --degree 5 --seed 2 --out " + (dir / "g.el")) == 0);
    {
        std::ofstream f(dir / "parts.txt");
        for (int u = 0; u < 40; ++u) f << (u / 20) << "\n";
    }
    CHECK(run("solve --input " + (dir / "g.el") + " --out " + (dir / "res") +
              " --tile-limit 20 --assignment " + (dir / "parts.txt") +
              " --emit-assignment " + (dir / "emitted.txt") + " --verify --sample 40") == 0);
    CHECK(slurp(dir.path / "emitted.txt") == slurp(dir.path / "parts.txt"));
}

TEST_CASE("simulate sweeps emit csv with a constant compute column across degrees") {
    TempDir dir("rapid_cli_sim");
    CHECK(run("simulate --topology er --sizes 128 --degrees 4,8 --seed 5 --out " +
              (dir / "sweep") + " --tile-limit 1024") == 0);
    const auto rows = read_csv(dir.path / "sweep/sweep.csv");
    REQUIRE(rows.size() == 3); // header + two points
    std::size_t col = 0;
    for (std::size_t i = 0; i < rows[0].size(); ++i)
        if (rows[0][i] == "compute_cycles") col = i;
    REQUIRE(col > 0);
    CHECK(rows[1][col] == rows[2][col]);

    // One report JSON per sweep point.
    CHECK(fs::exists(dir.path / "sweep/sim_er_n128_d4.json"));
    CHECK(fs::exists(dir.path / "sweep/sim_er_n128_d8.json"));
}

TEST_CASE("simulate rejects ambiguous input sources") {
    TempDir dir("rapid_cli_sim2");
    REQUIRE(run("generate er --n 32 --degree 4 --seed 1 --out " + (dir / "g.el")) == 0);
    CHECK(run("simulate --input " + (dir / "g.el") + " --topology er --seed 1 --out " +
              (dir / "x")) == 2);
    CHECK(run("simulate --topology er --n 32 --degree 4 --out " + (dir / "y")) == 2); // no seed
}

TEST_CASE("simulate honors a device config file") {
    TempDir dir("rapid_cli_dev");
    REQUIRE(run("generate er --n 48 --degree 5 --seed 9 --out " + (dir / "g.el")) == 0);
    {
        std::ofstream f(dir / "dev.cfg");
        f << "hbm_gbps = 4096\nfenand_gbps = 200\n";
    }
    CHECK(run("simulate --input " + (dir / "g.el") + " --out " + (dir / "sim") +
              " --device-config " + (dir / "dev.cfg")) == 0);
    const auto j = nlohmann::json::parse(slurp(dir.path / "sim/sim_g.json"));
    const auto ph = j["header"]["placeholders_in_effect"];
    for (const auto& f : ph) {
        CHECK(f != "hbm_gbps");
        CHECK(f != "fenand_gbps");
    }

    // RAPID_DEVICE_CONFIG is the fallback when the flag is absent.
    const std::string env_cmd = "RAPID_DEVICE_CONFIG=" + (dir / "dev.cfg") + " " + cli +
                                " simulate --input " + (dir / "g.el") + " --out " +
                                (dir / "sim_env") + " >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(env_cmd.c_str())) == 0);
    const auto je = nlohmann::json::parse(slurp(dir.path / "sim_env/sim_g.json"));
    CHECK(je["header"] == j["header"]);

    // A bad path in the environment surfaces as an I/O error.
    const std::string bad_cmd = "RAPID_DEVICE_CONFIG=" + (dir / "nope.cfg") + " " + cli +
                                " simulate --input " + (dir / "g.el") + " --out " +
                                (dir / "sim_bad") + " >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(bad_cmd.c_str())) == 3);
}

TEST_CASE("report merges rows and rejects schema mismatches") {
    TempDir dir("rapid_cli_rep");
    REQUIRE(run("generate er --n 48 --degree 5 --seed 4 --out " + (dir / "g.el")) == 0);
    REQUIRE(run("simulate --input " + (dir / "g.el") + " --out " + (dir / "s1")) == 0);
    REQUIRE(run("solve --input " + (dir / "g.el") + " --out " + (dir / "r1")) == 0);

    CHECK(run("report " + (dir / "s1/sim_g.json") + " " + (dir / "r1/summary.json") +
              " --out " + (dir / "merged.csv")) == 0);
    const auto rows = read_csv(dir.path / "merged.csv");
    REQUIRE(rows.size() == 3); // header + 2 rows
    CHECK(rows[0][0] == "file");

    // Markdown flavor.
    CHECK(run("report " + (dir / "s1/sim_g.json") + " --out " + (dir / "t.csv") +
              " --markdown " + (dir / "t.md")) == 0);
    CHECK(slurp(dir.path / "t.md").find("| file |") != std::string::npos);

    // Mismatched schema version.
    {
        std::ofstream f(dir / "bad.json");
        f << "{\"schema_version\": 99, \"table_row\": {\"n\": \"1\"}}\n";
    }
    CHECK(run("report " + (dir / "s1/sim_g.json") + " " + (dir / "bad.json") + " --out " +
              (dir / "z.csv")) == 3);

    // Empty input set: header-only table on stdout.
    CHECK(run("report --out " + (dir / "empty.csv")) == 0);
    const auto empty = read_csv(dir.path / "empty.csv");
    REQUIRE(empty.size() == 1);
    CHECK(empty[0][0] == "file");
}

TEST_CASE("version flag") {
    CHECK(run("--version") == 0);
}
