#include "hetplan/platform.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace hetplan {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* to_string(PeKind kind) {
    return kind == PeKind::CpuCluster ? "cpu-cluster" : "gpu";
}

const Opp& ProcessingElement::opp_at(int index, const std::string& path) const {
    if (index < 0 || index >= static_cast<int>(opps.size()))
        throw ValidationError(path.empty() ? id + ".opps" : path,
                              "opp index " + std::to_string(index) + " out of range [0, " +
                                  std::to_string(opps.size()) + ")");
    return opps[static_cast<size_t>(index)];
}

double ContentionSpec::factor(const std::string& pe_id,
                              const std::vector<std::string>& active_set) const {
    std::vector<std::string> others;
    for (const auto& id : active_set)
        if (id != pe_id)
            others.push_back(id);
    if (others.empty())
        return 1.0;
    std::sort(others.begin(), others.end());
    auto it = kappa.find({pe_id, others});
    return it == kappa.end() ? 1.0 : it->second;
}

const ProcessingElement* PlatformDescription::find_pe(const std::string& id) const {
    for (const auto& p : pes)
        if (p.id == id)
            return &p;
    return nullptr;
}

const ProcessingElement& PlatformDescription::pe(const std::string& id) const {
    const ProcessingElement* p = find_pe(id);
    if (!p)
        throw ValidationError("pes", "unknown pe id '" + id + "'");
    return *p;
}

const ProfileEntry* KernelProfile::find(const std::string& pe_id) const {
    auto it = entries.find(pe_id);
    return it == entries.end() ? nullptr : &it->second;
}

const ProfileEntry& KernelProfile::entry(const std::string& pe_id) const {
    const ProfileEntry* e = find(pe_id);
    if (!e)
        throw ValidationError("entries", "no profile entry for pe '" + pe_id + "'");
    return *e;
}

namespace {

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
}

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object())
        throw ValidationError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError(path + "." + key, "missing");
    return *it;
}

double require_number(const json& obj, const char* key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number())
        throw ValidationError(path + "." + key, "expected a number");
    return v.get<double>();
}

int require_int(const json& obj, const char* key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number_integer())
        throw ValidationError(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_string())
        throw ValidationError(path + "." + key, "expected a string");
    return v.get<std::string>();
}

bool is_power_of_two(long v) {
    return v > 0 && (v & (v - 1)) == 0;
}

GpuParams parse_gpu_params(const json& j, const std::string& path) {
    GpuParams g;
    g.warp_size = require_int(j, "warp_size", path);
    g.max_concurrent_warps = require_int(j, "max_concurrent_warps", path);
    const json& lat = require(j, "op_latency", path);
    if (!lat.is_object())
        throw ValidationError(path + ".op_latency", "expected an object");
    for (auto it = lat.begin(); it != lat.end(); ++it) {
        if (!it.value().is_number())
            throw ValidationError(path + ".op_latency." + it.key(), "expected a number");
        double cycles = it.value().get<double>();
        if (cycles < 0)
            throw ValidationError(path + ".op_latency." + it.key(), "negative latency");
        g.op_latency[it.key()] = cycles;
    }
    g.mem_latency_cycles = require_number(j, "mem_latency_cycles", path);
    g.hit_latency_cycles = require_number(j, "hit_latency_cycles", path);
    g.departure_delay_cycles = require_number(j, "departure_delay_cycles", path);
    g.cache_line_bytes = require_int(j, "cache_line_bytes", path);
    g.cache_sets = require_int(j, "cache_sets", path);
    g.cache_ways = require_int(j, "cache_ways", path);
    const json& en = require(j, "cache_enabled", path);
    if (!en.is_boolean())
        throw ValidationError(path + ".cache_enabled", "expected a boolean");
    g.cache_enabled = en.get<bool>();

    if (g.warp_size < 1)
        throw ValidationError(path + ".warp_size", "must be >= 1");
    if (g.max_concurrent_warps < 1)
        throw ValidationError(path + ".max_concurrent_warps", "must be >= 1");
    if (g.hit_latency_cycles < 0)
        throw ValidationError(path + ".hit_latency_cycles", "must be >= 0");
    if (!(g.mem_latency_cycles > g.hit_latency_cycles))
        throw ValidationError(path + ".mem_latency_cycles",
                              "must be greater than hit_latency_cycles");
    if (g.departure_delay_cycles < 1)
        throw ValidationError(path + ".departure_delay_cycles", "must be >= 1");
    if (!is_power_of_two(g.cache_line_bytes))
        throw ValidationError(path + ".cache_line_bytes", "must be a power of two");
    if (g.cache_enabled && (g.cache_sets < 1 || g.cache_ways < 1))
        throw ValidationError(path + ".cache_sets", "cache geometry must be >= 1");
    return g;
}

ProcessingElement parse_pe(const json& j, const std::string& path) {
    ProcessingElement pe;
    pe.id = require_string(j, "id", path);
    if (pe.id.empty())
        throw ValidationError(path + ".id", "must not be empty");

    std::string kind = require_string(j, "kind", path);
    if (kind == "cpu-cluster")
        pe.kind = PeKind::CpuCluster;
    else if (kind == "gpu")
        pe.kind = PeKind::Gpu;
    else
        throw ValidationError(path + ".kind", "expected 'cpu-cluster' or 'gpu', got '" + kind + "'");

    pe.core_count = require_int(j, "core_count", path);
    if (pe.core_count < 1)
        throw ValidationError(path + ".core_count", "must be >= 1");

    const json& opps = require(j, "opps", path);
    if (!opps.is_array() || opps.empty())
        throw ValidationError(path + ".opps", "expected a non-empty array");
    for (size_t i = 0; i < opps.size(); ++i) {
        std::string opath = path + ".opps[" + std::to_string(i) + "]";
        Opp o;
        o.freq_hz = require_number(opps[i], "freq_hz", opath);
        o.voltage_v = require_number(opps[i], "voltage_v", opath);
        if (o.freq_hz <= 0)
            throw ValidationError(opath + ".freq_hz", "must be > 0");
        if (o.voltage_v <= 0)
            throw ValidationError(opath + ".voltage_v", "must be > 0");
        pe.opps.push_back(o);
    }
    for (size_t i = 1; i < pe.opps.size(); ++i) {
        if (!(pe.opps[i].freq_hz > pe.opps[i - 1].freq_hz))
            throw ValidationError(path + ".opps", "not ascending by freq_hz");
        if (pe.opps[i].voltage_v < pe.opps[i - 1].voltage_v)
            throw ValidationError(path + ".opps", "voltage_v must be non-decreasing");
    }

    if (j.contains("c_eff_farads")) {
        double c = require_number(j, "c_eff_farads", path);
        if (c <= 0)
            throw ValidationError(path + ".c_eff_farads", "must be > 0");
        pe.c_eff_farads = c;
    }
    pe.p_static_watts = require_number(j, "p_static_watts", path);
    if (pe.p_static_watts < 0)
        throw ValidationError(path + ".p_static_watts", "must be >= 0");

    if (pe.kind == PeKind::CpuCluster) {
        if (j.contains("gpu_params"))
            throw ValidationError(path + ".gpu_params", "not allowed on a cpu-cluster");
        pe.cycles_per_mac = require_number(j, "cycles_per_mac", path);
        if (*pe.cycles_per_mac <= 0)
            throw ValidationError(path + ".cycles_per_mac", "must be > 0");
        pe.parallel_overhead_alpha = require_number(j, "parallel_overhead_alpha", path);
        if (*pe.parallel_overhead_alpha < 0 || *pe.parallel_overhead_alpha > 1)
            throw ValidationError(path + ".parallel_overhead_alpha", "must be in [0,1]");
    } else {
        if (j.contains("cycles_per_mac"))
            throw ValidationError(path + ".cycles_per_mac", "not allowed on a gpu");
        if (j.contains("parallel_overhead_alpha"))
            throw ValidationError(path + ".parallel_overhead_alpha", "not allowed on a gpu");
        pe.gpu_params = parse_gpu_params(require(j, "gpu_params", path), path + ".gpu_params");
    }
    return pe;
}

ThermalParams parse_thermal(const json& j, const std::string& path) {
    ThermalParams t;
    t.r_th_k_per_w = require_number(j, "r_th_k_per_w", path);
    t.c_th_j_per_k = require_number(j, "c_th_j_per_k", path);
    t.t_amb_c = require_number(j, "t_amb_c", path);
    t.t_trip_c = require_number(j, "t_trip_c", path);
    t.hysteresis_c = require_number(j, "hysteresis_c", path);
    t.governor_period_s = require_number(j, "governor_period_s", path);
    if (t.r_th_k_per_w <= 0)
        throw ValidationError(path + ".r_th_k_per_w", "must be > 0");
    if (t.c_th_j_per_k <= 0)
        throw ValidationError(path + ".c_th_j_per_k", "must be > 0");
    if (t.governor_period_s <= 0)
        throw ValidationError(path + ".governor_period_s", "must be > 0");
    if (!(t.t_trip_c > t.t_amb_c))
        throw ValidationError(path + ".t_trip_c", "must be greater than t_amb_c");
    if (t.hysteresis_c < 0)
        throw ValidationError(path + ".hysteresis_c", "must be >= 0");
    return t;
}

}  // namespace

PlatformDescription load_platform(const std::string& text) {
    json doc = parse_document(text);
    PlatformDescription platform;

    const json& pes = require(doc, "pes", "");
    if (!pes.is_array() || pes.empty())
        throw ValidationError("pes", "expected a non-empty array");
    for (size_t i = 0; i < pes.size(); ++i)
        platform.pes.push_back(parse_pe(pes[i], "pes[" + std::to_string(i) + "]"));

    for (size_t i = 0; i < platform.pes.size(); ++i)
        for (size_t k = i + 1; k < platform.pes.size(); ++k)
            if (platform.pes[i].id == platform.pes[k].id)
                throw ValidationError("pes[" + std::to_string(k) + "].id",
                                      "duplicate pe id '" + platform.pes[i].id + "'");

    platform.thermal = parse_thermal(require(doc, "thermal", ""), "thermal");

    if (doc.contains("contention")) {
        const json& cont = doc["contention"];
        if (!cont.is_array())
            throw ValidationError("contention", "expected an array");
        for (size_t i = 0; i < cont.size(); ++i) {
            std::string cpath = "contention[" + std::to_string(i) + "]";
            std::string pe_id = require_string(cont[i], "pe", cpath);
            if (!platform.find_pe(pe_id))
                throw ValidationError(cpath + ".pe", "unknown pe id '" + pe_id + "'");
            const json& with = require(cont[i], "with", cpath);
            if (!with.is_array() || with.empty())
                throw ValidationError(cpath + ".with", "expected a non-empty array");
            std::vector<std::string> others;
            for (const auto& w : with) {
                if (!w.is_string())
                    throw ValidationError(cpath + ".with", "expected strings");
                std::string other = w.get<std::string>();
                if (!platform.find_pe(other))
                    throw ValidationError(cpath + ".with", "unknown pe id '" + other + "'");
                if (other == pe_id)
                    throw ValidationError(cpath + ".with", "must not contain the pe itself");
                others.push_back(other);
            }
            std::sort(others.begin(), others.end());
            others.erase(std::unique(others.begin(), others.end()), others.end());
            double factor = require_number(cont[i], "factor", cpath);
            if (factor < 1.0)
                throw ValidationError(cpath + ".factor", "must be >= 1");
            platform.contention.kappa[{pe_id, others}] = factor;
        }
    }
    return platform;
}

KernelProfile load_profile(const std::string& text, const PlatformDescription& platform) {
    json doc = parse_document(text);
    KernelProfile profile;

    const json& entries = require(doc, "entries", "");
    if (!entries.is_array() || entries.empty())
        throw ValidationError("entries", "expected a non-empty array");
    for (size_t i = 0; i < entries.size(); ++i) {
        std::string path = "entries[" + std::to_string(i) + "]";
        std::string pe_id = require_string(entries[i], "pe", path);
        const ProcessingElement* pe = platform.find_pe(pe_id);
        if (!pe)
            throw ValidationError(path + ".pe", "unknown pe id '" + pe_id + "'");
        if (profile.entries.count(pe_id))
            throw ValidationError(path + ".pe", "duplicate entry for pe '" + pe_id + "'");

        ProfileEntry e;
        e.t_sample_s = require_number(entries[i], "t_sample_s", path);
        e.p_sample_w = require_number(entries[i], "p_sample_w", path);
        e.rho = require_number(entries[i], "rho", path);
        e.sample_opp_index = require_int(entries[i], "sample_opp_index", path);

        if (e.t_sample_s <= 0)
            throw ValidationError(path + ".t_sample_s", "must be > 0");
        if (e.rho < 0 || e.rho > 1)
            throw ValidationError(path + ".rho", "rho out of range [0,1]");
        if (!(e.p_sample_w > pe->p_static_watts))
            throw ValidationError(path + ".p_sample_w",
                                  "must exceed the pe's static power");
        if (e.sample_opp_index < 0 || e.sample_opp_index >= static_cast<int>(pe->opps.size()))
            throw ValidationError(path + ".sample_opp_index", "out of range");
        profile.entries[pe_id] = e;
    }
    return profile;
}

NetworkDescription load_network(const std::string& text) {
    json doc = parse_document(text);
    NetworkDescription net;

    const json& layers = require(doc, "layers", "");
    if (!layers.is_array())
        throw ValidationError("layers", "expected an array");
    if (layers.empty())
        throw ValidationError("layers", "must contain at least one layer");
    for (size_t i = 0; i < layers.size(); ++i) {
        std::string path = "layers[" + std::to_string(i) + "]";
        Layer l;
        l.name = require_string(layers[i], "name", path);
        l.macs = require_number(layers[i], "macs", path);
        if (!(l.macs > 0))
            throw ValidationError(path + ".macs", "must be > 0");
        if (layers[i].contains("parallel_fraction")) {
            l.parallel_fraction = require_number(layers[i], "parallel_fraction", path);
            if (l.parallel_fraction < 0 || l.parallel_fraction > 1)
                throw ValidationError(path + ".parallel_fraction", "must be in [0,1]");
        }
        net.layers.push_back(l);
    }
    return net;
}

namespace {

ojson opp_to_json(const Opp& o) {
    return ojson{{"freq_hz", o.freq_hz}, {"voltage_v", o.voltage_v}};
}

ojson gpu_params_to_json(const GpuParams& g) {
    ojson lat = ojson::object();
    for (const auto& [op, cycles] : g.op_latency)
        lat[op] = cycles;
    ojson j;
    j["warp_size"] = g.warp_size;
    j["max_concurrent_warps"] = g.max_concurrent_warps;
    j["op_latency"] = lat;
    j["mem_latency_cycles"] = g.mem_latency_cycles;
    j["hit_latency_cycles"] = g.hit_latency_cycles;
    j["departure_delay_cycles"] = g.departure_delay_cycles;
    j["cache_line_bytes"] = g.cache_line_bytes;
    j["cache_sets"] = g.cache_sets;
    j["cache_ways"] = g.cache_ways;
    j["cache_enabled"] = g.cache_enabled;
    return j;
}

}  // namespace

std::string save_platform(const PlatformDescription& platform) {
    ojson j;
    j["pes"] = ojson::array();
    for (const auto& pe : platform.pes) {
        ojson p;
        p["id"] = pe.id;
        p["kind"] = to_string(pe.kind);
        p["core_count"] = pe.core_count;
        p["opps"] = ojson::array();
        for (const auto& o : pe.opps)
            p["opps"].push_back(opp_to_json(o));
        if (pe.c_eff_farads)
            p["c_eff_farads"] = *pe.c_eff_farads;
        p["p_static_watts"] = pe.p_static_watts;
        if (pe.cycles_per_mac)
            p["cycles_per_mac"] = *pe.cycles_per_mac;
        if (pe.parallel_overhead_alpha)
            p["parallel_overhead_alpha"] = *pe.parallel_overhead_alpha;
        if (pe.gpu_params)
            p["gpu_params"] = gpu_params_to_json(*pe.gpu_params);
        j["pes"].push_back(p);
    }
    ojson t;
    t["r_th_k_per_w"] = platform.thermal.r_th_k_per_w;
    t["c_th_j_per_k"] = platform.thermal.c_th_j_per_k;
    t["t_amb_c"] = platform.thermal.t_amb_c;
    t["t_trip_c"] = platform.thermal.t_trip_c;
    t["hysteresis_c"] = platform.thermal.hysteresis_c;
    t["governor_period_s"] = platform.thermal.governor_period_s;
    j["thermal"] = t;

    j["contention"] = ojson::array();
    for (const auto& [key, factor] : platform.contention.kappa) {
        ojson c;
        c["pe"] = key.first;
        c["with"] = key.second;
        c["factor"] = factor;
        j["contention"].push_back(c);
    }
    return j.dump(2) + "\n";
}

std::string save_profile(const KernelProfile& profile) {
    ojson j;
    j["entries"] = ojson::array();
    for (const auto& [pe_id, e] : profile.entries) {
        ojson entry;
        entry["pe"] = pe_id;
        entry["t_sample_s"] = e.t_sample_s;
        entry["p_sample_w"] = e.p_sample_w;
        entry["rho"] = e.rho;
        entry["sample_opp_index"] = e.sample_opp_index;
        j["entries"].push_back(entry);
    }
    return j.dump(2) + "\n";
}

std::string save_network(const NetworkDescription& network) {
    ojson j;
    j["layers"] = ojson::array();
    for (const auto& l : network.layers) {
        ojson layer;
        layer["name"] = l.name;
        layer["macs"] = l.macs;
        layer["parallel_fraction"] = l.parallel_fraction;
        j["layers"].push_back(layer);
    }
    return j.dump(2) + "\n";
}

}  // namespace hetplan
