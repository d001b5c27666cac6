#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hetplan/platform.hpp"

namespace hetplan::pipeline {

// A sub-core-cluster: `core_count` cores of one cpu-cluster acting as one
// pipeline processing element.
struct CoreGroup {
    std::string cluster_id;
    int core_count = 1;
    bool operator==(const CoreGroup&) const = default;
};

struct Stage {
    CoreGroup group;
    int first_layer = 0;
    int last_layer = 0;  // inclusive
    bool operator==(const Stage&) const = default;
};

struct PipelineConfig {
    std::vector<Stage> stages;  // layer ranges partition [0, L) in order
    std::map<std::string, int> opp_index_per_cluster;
    bool operator==(const PipelineConfig&) const = default;
};

struct ThroughputReport {
    double throughput_ips = 0.0;  // 1 / max stage latency
    int bottleneck_stage_index = 0;  // first maximal stage
    std::vector<double> stage_latency_s;
    double end_to_end_latency_s = 0.0;
};

// cycles = macs * cycles_per_mac; core scaling p(n) = n / (1 + alpha*(n-1)),
// Amdahl-weighted by the layer's parallel fraction; latency = cycles / (f * speedup).
double layer_latency(const Layer& layer, const CoreGroup& group, int opp_index,
                     const PlatformDescription& platform);

// Sum of layer_latency over the inclusive range [first_layer, last_layer].
double stage_latency(const NetworkDescription& network, int first_layer, int last_layer,
                     const CoreGroup& group, int opp_index, const PlatformDescription& platform);

ThroughputReport evaluate(const PipelineConfig& config, const NetworkDescription& network,
                          const PlatformDescription& platform);

struct PartitionResult {
    std::vector<std::pair<int, int>> ranges;  // inclusive per-slot layer ranges
    double bottleneck = 0.0;
};

// Min-max contiguous partition of layers onto ordered stage slots; every slot
// takes at least one layer. latency[layer][slot] > 0. Dynamic program over
// (layers consumed, slots used) with earliest-split tie-breaks.
PartitionResult optimal_layer_partition(const std::vector<std::vector<double>>& latency);

// All ways to carve each cpu-cluster's cores into ordered groups (compositions
// using all cores, or the cluster unused), concatenated in platform order,
// with 1..max_stages total groups. Lexicographic over (cluster, core_count).
std::vector<std::vector<CoreGroup>> enumerate_core_groupings(const PlatformDescription& platform,
                                                             int max_stages);

struct LandscapePoint {
    std::vector<CoreGroup> grouping;
    double bottleneck_s = 0.0;
    double throughput_ips = 0.0;
};

struct DseOutcome {
    PipelineConfig best;
    ThroughputReport report;
    std::vector<LandscapePoint> landscape;  // every evaluated grouping
};

// Exhaustive over core groupings, exact DP over layer allocation. Ties go to
// fewer stages, then lower end-to-end latency, then enumeration order.
DseOutcome dse(const NetworkDescription& network, const PlatformDescription& platform,
               const std::map<std::string, int>& opp_index_per_cluster, int max_stages);

std::string grouping_to_string(const std::vector<CoreGroup>& grouping);

// CSV export: `grouping,stages,bottleneck_s,throughput_ips`.
std::string landscape_csv(const DseOutcome& outcome);

}  // namespace hetplan::pipeline
