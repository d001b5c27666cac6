#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hetplan/errors.hpp"

namespace hetplan {

// One DVFS operating point of a cluster.
struct Opp {
    double freq_hz = 0.0;
    double voltage_v = 0.0;
    bool operator==(const Opp&) const = default;
};

// GPU architectural parameters. On real silicon these come from
// micro-benchmarks; which quantities exactly a vendor exposes varies, so this
// set is the superset the prediction model consumes (see docs/formats.md).
struct GpuParams {
    int warp_size = 32;
    int max_concurrent_warps = 8;
    std::map<std::string, double> op_latency;  // op class -> issue cycles
    double mem_latency_cycles = 0.0;           // miss / uncached cost
    double hit_latency_cycles = 0.0;
    double departure_delay_cycles = 1.0;       // min spacing between outstanding requests
    int cache_line_bytes = 64;
    int cache_sets = 1;
    int cache_ways = 1;
    bool cache_enabled = true;
    bool operator==(const GpuParams&) const = default;
};

enum class PeKind { CpuCluster, Gpu };

const char* to_string(PeKind kind);

struct ProcessingElement {
    std::string id;
    PeKind kind = PeKind::CpuCluster;
    int core_count = 1;
    std::vector<Opp> opps;                          // strictly ascending by freq_hz
    std::optional<double> c_eff_farads;             // may be calibrated from a profile instead
    double p_static_watts = 0.0;
    std::optional<double> cycles_per_mac;           // cpu-cluster only
    std::optional<double> parallel_overhead_alpha;  // cpu-cluster only, in [0,1]
    std::optional<GpuParams> gpu_params;            // gpu only

    const Opp& opp_at(int index, const std::string& path = "") const;
    bool operator==(const ProcessingElement&) const = default;
};

struct ThermalParams {
    double r_th_k_per_w = 1.0;
    double c_th_j_per_k = 1.0;
    double t_amb_c = 25.0;
    double t_trip_c = 70.0;
    double hysteresis_c = 0.0;
    double governor_period_s = 0.1;
    bool operator==(const ThermalParams&) const = default;
};

// Runtime dilation factors for concurrent execution. Keyed by the slowed-down
// PE plus the sorted set of *other* PEs active alongside it; unspecified
// combinations dilate by 1.
struct ContentionSpec {
    std::map<std::pair<std::string, std::vector<std::string>>, double> kappa;

    // `active_set` is the full set of co-running PEs (it may include pe_id).
    double factor(const std::string& pe_id, const std::vector<std::string>& active_set) const;
    bool operator==(const ContentionSpec&) const = default;
};

struct PlatformDescription {
    std::vector<ProcessingElement> pes;
    ThermalParams thermal;
    ContentionSpec contention;

    const ProcessingElement* find_pe(const std::string& id) const;
    const ProcessingElement& pe(const std::string& id) const;  // throws ValidationError
    bool operator==(const PlatformDescription&) const = default;
};

// Measurements from one profiling run of a kernel on one PE.
struct ProfileEntry {
    double t_sample_s = 0.0;
    double p_sample_w = 0.0;   // active power at the sample OPP
    double rho = 0.0;          // compute-bound fraction in [0,1]
    int sample_opp_index = 0;
    bool operator==(const ProfileEntry&) const = default;
};

struct KernelProfile {
    std::map<std::string, ProfileEntry> entries;  // keyed by PE id

    const ProfileEntry* find(const std::string& pe_id) const;
    const ProfileEntry& entry(const std::string& pe_id) const;  // throws ValidationError
    bool operator==(const KernelProfile&) const = default;
};

struct Layer {
    std::string name;
    double macs = 0.0;
    double parallel_fraction = 1.0;
    bool operator==(const Layer&) const = default;
};

struct NetworkDescription {
    std::vector<Layer> layers;
    bool operator==(const NetworkDescription&) const = default;
};

// Loaders parse a JSON document and validate every invariant; serializers emit
// the canonical field ordering so load/save round-trips are value-exact.
PlatformDescription load_platform(const std::string& text);
std::string save_platform(const PlatformDescription& platform);

KernelProfile load_profile(const std::string& text, const PlatformDescription& platform);
std::string save_profile(const KernelProfile& profile);

NetworkDescription load_network(const std::string& text);
std::string save_network(const NetworkDescription& network);

}  // namespace hetplan
