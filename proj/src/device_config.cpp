#include "rapid/device_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "rapid/error.hpp"

namespace rapid {
namespace sim {

namespace {

struct FieldRef {
    enum class Kind { U32, F64, Bool, OptF64 } kind;
    void* ptr;
};

std::map<std::string, FieldRef> field_table(DeviceConfig& c) {
    using K = FieldRef::Kind;
    return {
        {"clock_ns", {K::F64, &c.clock_ns}},
        {"set_reset_ns", {K::F64, &c.set_reset_ns}},
        {"write_energy_pj", {K::F64, &c.write_energy_pj}},
        {"unit_rows", {K::U32, &c.unit_rows}},
        {"unit_cols", {K::U32, &c.unit_cols}},
        {"units_per_tile", {K::U32, &c.units_per_tile}},
        {"fw_tiles", {K::U32, &c.fw_tiles}},
        {"mp_tiles", {K::U32, &c.mp_tiles}},
        {"cycles_xor", {K::U32, &c.cycles_xor}},
        {"cycles_nor", {K::U32, &c.cycles_nor}},
        {"cycles_not", {K::U32, &c.cycles_not}},
        {"cycles_nand", {K::U32, &c.cycles_nand}},
        {"cycles_minority", {K::U32, &c.cycles_minority}},
        {"cycles_or", {K::U32, &c.cycles_or}},
        {"bits", {K::U32, &c.bits}},
        {"dma_read_cycles", {K::U32, &c.dma_read_cycles}},
        {"dma_write_cycles", {K::U32, &c.dma_write_cycles}},
        {"burst_rows", {K::U32, &c.burst_rows}},
        {"comparator_stage_cycles", {K::U32, &c.comparator_stage_cycles}},
        {"comparator_fanin", {K::U32, &c.comparator_fanin}},
        {"ucie_gbps", {K::F64, &c.ucie_gbps}},
        {"hbm_gbps", {K::F64, &c.hbm_gbps}},
        {"fenand_gbps", {K::F64, &c.fenand_gbps}},
        {"ucie_pj_per_byte", {K::F64, &c.ucie_pj_per_byte}},
        {"hbm_pj_per_byte", {K::F64, &c.hbm_pj_per_byte}},
        {"fenand_pj_per_byte", {K::F64, &c.fenand_pj_per_byte}},
        {"pipeline_prefetch", {K::Bool, &c.pipeline_prefetch}},
        {"update_probability", {K::OptF64, &c.update_probability}},
        {"fw_unit_area_um2", {K::F64, &c.fw_unit_area_um2}},
        {"mp_unit_area_um2", {K::F64, &c.mp_unit_area_um2}},
    };
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void set_field(const FieldRef& f, const std::string& key, double value) {
    switch (f.kind) {
        case FieldRef::Kind::U32:
            if (value < 0 || value != std::floor(value) || value > 4294967295.0)
                throw std::invalid_argument(key + " must be a non-negative integer");
            *static_cast<std::uint32_t*>(f.ptr) = std::uint32_t(value);
            break;
        case FieldRef::Kind::F64:
            *static_cast<double*>(f.ptr) = value;
            break;
        case FieldRef::Kind::Bool:
            *static_cast<bool*>(f.ptr) = value != 0.0;
            break;
        case FieldRef::Kind::OptF64:
            *static_cast<std::optional<double>*>(f.ptr) = value;
            break;
    }
}

} // namespace

std::uint32_t DeviceConfig::write_pulse_cycles() const {
    return std::uint32_t(std::ceil(set_reset_ns / clock_ns));
}

void DeviceConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0)) throw std::invalid_argument(std::string(name) + " must be positive");
    };
    positive(clock_ns, "clock_ns");
    positive(set_reset_ns, "set_reset_ns");
    positive(write_energy_pj, "write_energy_pj");
    positive(double(unit_rows), "unit_rows");
    positive(double(unit_cols), "unit_cols");
    positive(double(units_per_tile), "units_per_tile");
    positive(double(fw_tiles), "fw_tiles");
    positive(double(mp_tiles), "mp_tiles");
    positive(double(cycles_xor), "cycles_xor");
    positive(double(cycles_not), "cycles_not");
    positive(double(cycles_minority), "cycles_minority");
    positive(double(bits), "bits");
    positive(double(dma_read_cycles), "dma_read_cycles");
    positive(double(dma_write_cycles), "dma_write_cycles");
    positive(double(burst_rows), "burst_rows");
    positive(double(comparator_stage_cycles), "comparator_stage_cycles");
    if (comparator_fanin < 2) throw std::invalid_argument("comparator_fanin must be >= 2");
    positive(ucie_gbps, "ucie_gbps");
    positive(hbm_gbps, "hbm_gbps");
    positive(fenand_gbps, "fenand_gbps");
    if (update_probability && (*update_probability < 0.0 || *update_probability > 1.0))
        throw std::invalid_argument("update_probability must lie in [0, 1]");
}

const std::vector<std::string>& placeholder_fields() {
    static const std::vector<std::string> fields = {
        "hbm_gbps", "fenand_gbps", "ucie_pj_per_byte", "hbm_pj_per_byte", "fenand_pj_per_byte"};
    return fields;
}

std::pair<DeviceConfig, std::vector<std::string>> load_device_config(const std::string& path) {
    DeviceConfig cfg;
    auto table = field_table(cfg);
    std::vector<std::string> seen;

    auto apply = [&](const std::string& key, double value, std::size_t line) {
        auto it = table.find(key);
        if (it == table.end()) throw ParseError(line, "unknown device config key: " + key);
        set_field(it->second, key, value);
        seen.push_back(key);
    };

    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        std::ifstream f(path);
        if (!f) throw IoError("cannot open " + path);
        nlohmann::json j = nlohmann::json::parse(f, nullptr, true, true);
        for (auto& [key, value] : j.items()) {
            if (value.is_boolean())
                apply(key, value.get<bool>() ? 1.0 : 0.0, 0);
            else if (value.is_number())
                apply(key, value.get<double>(), 0);
            else
                throw std::invalid_argument("device config value for " + key +
                                            " must be a number or bool");
        }
    } else {
        std::ifstream f(path);
        if (!f) throw IoError("cannot open " + path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(f, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            std::string key, eq, value;
            if (!(ss >> key)) continue; // blank
            if (!(ss >> eq) || eq != "=" || !(ss >> value))
                throw ParseError(lineno, "expected \"key = value\"");
            std::string extra;
            if (ss >> extra) throw ParseError(lineno, "trailing tokens after value");
            double v = 0;
            if (value == "true")
                v = 1.0;
            else if (value == "false")
                v = 0.0;
            else {
                try {
                    std::size_t pos = 0;
                    v = std::stod(value, &pos);
                    if (pos != value.size()) throw std::invalid_argument(value);
                } catch (const std::exception&) {
                    throw ParseError(lineno, "not a number: " + value);
                }
            }
            apply(key, v, lineno);
        }
    }
    cfg.validate();
    return {cfg, seen};
}

std::string serialize_device_config(const DeviceConfig& cfg) {
    DeviceConfig copy = cfg;
    auto table = field_table(copy);
    std::ostringstream out;
    for (const auto& [key, ref] : table) { // std::map: keys in sorted order
        out << key << " = ";
        switch (ref.kind) {
            case FieldRef::Kind::U32:
                out << *static_cast<const std::uint32_t*>(ref.ptr);
                break;
            case FieldRef::Kind::F64:
                out << format_double(*static_cast<const double*>(ref.ptr));
                break;
            case FieldRef::Kind::Bool:
                out << (*static_cast<const bool*>(ref.ptr) ? "true" : "false");
                break;
            case FieldRef::Kind::OptF64: {
                const auto& opt = *static_cast<const std::optional<double>*>(ref.ptr);
                out << (opt ? format_double(*opt) : "unset");
                break;
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string device_config_hash(const DeviceConfig& cfg) {
    const std::string text = serialize_device_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace sim
} // namespace rapid
