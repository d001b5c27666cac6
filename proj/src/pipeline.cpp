#include "hetplan/pipeline.hpp"

#include <algorithm>
#include <limits>

#include "hetplan/fmt.hpp"

namespace hetplan::pipeline {

double layer_latency(const Layer& layer, const CoreGroup& group, int opp_index,
                     const PlatformDescription& platform) {
    const ProcessingElement& cluster = platform.pe(group.cluster_id);
    if (cluster.kind != PeKind::CpuCluster)
        throw ValidationError(group.cluster_id, "not a cpu-cluster; cannot host a pipeline stage");
    if (group.core_count < 1 || group.core_count > cluster.core_count)
        throw ValidationError(group.cluster_id + ".core_count",
                              "group size " + std::to_string(group.core_count) +
                                  " outside [1, " + std::to_string(cluster.core_count) + "]");
    const Opp& opp = cluster.opp_at(opp_index, cluster.id + ".opps");

    double n = static_cast<double>(group.core_count);
    double alpha = *cluster.parallel_overhead_alpha;
    double parallelism = n / (1.0 + alpha * (n - 1.0));
    double pf = layer.parallel_fraction;
    double speedup = 1.0 / ((1.0 - pf) + pf / parallelism);
    double cycles = layer.macs * *cluster.cycles_per_mac;
    return cycles / (opp.freq_hz * speedup);
}

double stage_latency(const NetworkDescription& network, int first_layer, int last_layer,
                     const CoreGroup& group, int opp_index, const PlatformDescription& platform) {
    if (first_layer > last_layer)
        throw ValidationError("stage", "empty layer range");
    if (first_layer < 0 || last_layer >= static_cast<int>(network.layers.size()))
        throw ValidationError("stage", "layer range outside the network");
    double total = 0.0;
    for (int l = first_layer; l <= last_layer; ++l)
        total += layer_latency(network.layers[static_cast<size_t>(l)], group, opp_index, platform);
    return total;
}

namespace {

int opp_for_cluster(const std::map<std::string, int>& opps, const std::string& cluster_id) {
    auto it = opps.find(cluster_id);
    if (it == opps.end())
        throw ValidationError("opp_index_per_cluster", "no opp for cluster '" + cluster_id + "'");
    return it->second;
}

}  // namespace

ThroughputReport evaluate(const PipelineConfig& config, const NetworkDescription& network,
                          const PlatformDescription& platform) {
    if (config.stages.empty())
        throw ValidationError("stages", "must contain at least one stage");
    int layer_count = static_cast<int>(network.layers.size());
    int expected_first = 0;
    std::map<std::string, int> cores_used;
    for (size_t i = 0; i < config.stages.size(); ++i) {
        const Stage& st = config.stages[i];
        if (st.first_layer != expected_first)
            throw ValidationError("stages[" + std::to_string(i) + "]",
                                  "layer ranges must be contiguous and in order");
        if (st.last_layer < st.first_layer)
            throw ValidationError("stages[" + std::to_string(i) + "]", "empty layer range");
        expected_first = st.last_layer + 1;
        cores_used[st.group.cluster_id] += st.group.core_count;
    }
    if (expected_first != layer_count)
        throw ValidationError("stages", "layer ranges must cover every layer exactly once");
    for (const auto& [cluster_id, used] : cores_used) {
        const ProcessingElement& cluster = platform.pe(cluster_id);
        if (used > cluster.core_count)
            throw ValidationError(cluster_id, "stages use " + std::to_string(used) +
                                                  " cores, capacity " +
                                                  std::to_string(cluster.core_count));
    }

    ThroughputReport report;
    for (const auto& st : config.stages) {
        double lat = stage_latency(network, st.first_layer, st.last_layer, st.group,
                                   opp_for_cluster(config.opp_index_per_cluster,
                                                   st.group.cluster_id),
                                   platform);
        report.stage_latency_s.push_back(lat);
        report.end_to_end_latency_s += lat;
    }
    auto worst = std::max_element(report.stage_latency_s.begin(), report.stage_latency_s.end());
    report.bottleneck_stage_index = static_cast<int>(worst - report.stage_latency_s.begin());
    report.throughput_ips = 1.0 / *worst;
    return report;
}

PartitionResult optimal_layer_partition(const std::vector<std::vector<double>>& latency) {
    int layers = static_cast<int>(latency.size());
    if (layers == 0)
        throw ValidationError("latency", "no layers");
    int slots = static_cast<int>(latency[0].size());
    if (slots == 0)
        throw ValidationError("latency", "no stage slots");
    for (int l = 0; l < layers; ++l) {
        if (static_cast<int>(latency[static_cast<size_t>(l)].size()) != slots)
            throw ValidationError("latency", "ragged latency matrix");
        for (int j = 0; j < slots; ++j)
            if (!(latency[static_cast<size_t>(l)][static_cast<size_t>(j)] > 0))
                throw ValidationError("latency", "latencies must be > 0");
    }
    if (layers < slots)
        throw ValidationError("latency", "fewer layers than stage slots");

    // Left-to-right sum of layers [lo, hi) on slot j; evaluate() accumulates
    // stage costs the same way, keeping the two paths bit-identical.
    auto range_cost = [&](int lo, int hi, int j) {
        double sum = 0.0;
        for (int l = lo; l < hi; ++l)
            sum += latency[static_cast<size_t>(l)][static_cast<size_t>(j)];
        return sum;
    };

    constexpr double kInf = std::numeric_limits<double>::infinity();
    // best[i][j]: minimal bottleneck placing the first i layers on the first
    // j slots (every slot non-empty); split[i][j]: chosen boundary k.
    std::vector<std::vector<double>> best(static_cast<size_t>(layers) + 1,
                                          std::vector<double>(static_cast<size_t>(slots) + 1,
                                                              kInf));
    std::vector<std::vector<int>> split(static_cast<size_t>(layers) + 1,
                                        std::vector<int>(static_cast<size_t>(slots) + 1, 0));

    for (int i = 1; i <= layers; ++i)
        best[static_cast<size_t>(i)][1] = range_cost(0, i, 0);
    for (int j = 2; j <= slots; ++j) {
        for (int i = j; i <= layers; ++i) {
            for (int k = j - 1; k <= i - 1; ++k) {
                double candidate = std::max(best[static_cast<size_t>(k)][static_cast<size_t>(j - 1)],
                                            range_cost(k, i, j - 1));
                if (candidate < best[static_cast<size_t>(i)][static_cast<size_t>(j)]) {
                    best[static_cast<size_t>(i)][static_cast<size_t>(j)] = candidate;
                    split[static_cast<size_t>(i)][static_cast<size_t>(j)] = k;
                }
            }
        }
    }

    PartitionResult result;
    result.bottleneck = best[static_cast<size_t>(layers)][static_cast<size_t>(slots)];
    result.ranges.assign(static_cast<size_t>(slots), {0, 0});
    int hi = layers;
    for (int j = slots; j >= 1; --j) {
        int lo = j == 1 ? 0 : split[static_cast<size_t>(hi)][static_cast<size_t>(j)];
        result.ranges[static_cast<size_t>(j - 1)] = {lo, hi - 1};
        hi = lo;
    }
    return result;
}

namespace {

void compositions_into(int total, int parts, std::vector<int>& current,
                       std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        if (total >= 1) {
            current.push_back(total);
            out.push_back(current);
            current.pop_back();
        }
        return;
    }
    for (int first = 1; first <= total - (parts - 1); ++first) {
        current.push_back(first);
        compositions_into(total - first, parts - 1, current, out);
        current.pop_back();
    }
}

// All ordered ways to split `total` cores into exactly `parts` groups of >= 1.
std::vector<std::vector<int>> compositions(int total, int parts) {
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    compositions_into(total, parts, current, out);
    return out;
}

}  // namespace

std::vector<std::vector<CoreGroup>> enumerate_core_groupings(const PlatformDescription& platform,
                                                             int max_stages) {
    if (max_stages < 1)
        throw ValidationError("max_stages", "must be >= 1");

    std::vector<const ProcessingElement*> clusters;
    for (const auto& pe : platform.pes)
        if (pe.kind == PeKind::CpuCluster)
            clusters.push_back(&pe);
    if (clusters.empty())
        throw ValidationError("pes", "platform has no cpu-cluster pe");

    // Per cluster: the unused option plus every composition of all its cores.
    std::vector<std::vector<std::vector<int>>> options(clusters.size());
    for (size_t c = 0; c < clusters.size(); ++c) {
        options[c].push_back({});  // cluster unused
        int cores = clusters[c]->core_count;
        for (int parts = 1; parts <= std::min(cores, max_stages); ++parts)
            for (auto& comp : compositions(cores, parts))
                options[c].push_back(std::move(comp));
    }

    std::vector<std::vector<CoreGroup>> out;
    std::vector<size_t> pick(clusters.size(), 0);
    for (;;) {
        int total_groups = 0;
        for (size_t c = 0; c < clusters.size(); ++c)
            total_groups += static_cast<int>(options[c][pick[c]].size());
        if (total_groups >= 1 && total_groups <= max_stages) {
            std::vector<CoreGroup> grouping;
            for (size_t c = 0; c < clusters.size(); ++c)
                for (int cores : options[c][pick[c]])
                    grouping.push_back({clusters[c]->id, cores});
            out.push_back(std::move(grouping));
        }
        size_t pos = pick.size();
        for (;;) {
            if (pos == 0)
                goto done;
            --pos;
            if (++pick[pos] < options[pos].size())
                break;
            pick[pos] = 0;
        }
    }
done:
    // Canonical order: lexicographic over (cluster position, core count).
    std::map<std::string, size_t> cluster_pos;
    for (size_t c = 0; c < clusters.size(); ++c)
        cluster_pos[clusters[c]->id] = c;
    auto key_of = [&](const std::vector<CoreGroup>& g) {
        std::vector<std::pair<size_t, int>> key;
        for (const auto& cg : g)
            key.push_back({cluster_pos[cg.cluster_id], cg.core_count});
        return key;
    };
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return key_of(a) < key_of(b);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DseOutcome dse(const NetworkDescription& network, const PlatformDescription& platform,
               const std::map<std::string, int>& opp_index_per_cluster, int max_stages) {
    if (network.layers.empty())
        throw ValidationError("layers", "network is empty");
    int layer_count = static_cast<int>(network.layers.size());

    std::vector<std::vector<CoreGroup>> groupings = enumerate_core_groupings(platform, max_stages);

    DseOutcome outcome;
    bool have_best = false;
    double best_bottleneck = 0.0;
    double best_e2e = 0.0;
    std::vector<CoreGroup> best_grouping;
    PartitionResult best_partition;

    for (const auto& grouping : groupings) {
        int slots = static_cast<int>(grouping.size());
        if (slots > layer_count)
            continue;

        std::vector<std::vector<double>> lat(static_cast<size_t>(layer_count),
                                             std::vector<double>(static_cast<size_t>(slots)));
        for (int l = 0; l < layer_count; ++l)
            for (int j = 0; j < slots; ++j)
                lat[static_cast<size_t>(l)][static_cast<size_t>(j)] = layer_latency(
                    network.layers[static_cast<size_t>(l)], grouping[static_cast<size_t>(j)],
                    opp_for_cluster(opp_index_per_cluster, grouping[static_cast<size_t>(j)].cluster_id),
                    platform);

        PartitionResult part = optimal_layer_partition(lat);
        double e2e = 0.0;
        for (int j = 0; j < slots; ++j) {
            double sum = 0.0;
            for (int l = part.ranges[static_cast<size_t>(j)].first;
                 l <= part.ranges[static_cast<size_t>(j)].second; ++l)
                sum += lat[static_cast<size_t>(l)][static_cast<size_t>(j)];
            e2e += sum;
        }

        outcome.landscape.push_back({grouping, part.bottleneck, 1.0 / part.bottleneck});

        bool better = false;
        if (!have_best) {
            better = true;
        } else if (part.bottleneck < best_bottleneck) {
            better = true;
        } else if (part.bottleneck == best_bottleneck) {
            if (slots < static_cast<int>(best_grouping.size()))
                better = true;
            else if (slots == static_cast<int>(best_grouping.size()) && e2e < best_e2e)
                better = true;
        }
        if (better) {
            have_best = true;
            best_bottleneck = part.bottleneck;
            best_e2e = e2e;
            best_grouping = grouping;
            best_partition = part;
        }
    }

    if (!have_best)
        throw ValidationError("max_stages", "no viable grouping for this network");

    for (size_t j = 0; j < best_grouping.size(); ++j)
        outcome.best.stages.push_back({best_grouping[j], best_partition.ranges[j].first,
                                       best_partition.ranges[j].second});
    for (const auto& pe : platform.pes)
        if (pe.kind == PeKind::CpuCluster)
            outcome.best.opp_index_per_cluster[pe.id] =
                opp_for_cluster(opp_index_per_cluster, pe.id);
    outcome.report = evaluate(outcome.best, network, platform);
    return outcome;
}

std::string grouping_to_string(const std::vector<CoreGroup>& grouping) {
    std::string s;
    for (size_t i = 0; i < grouping.size(); ++i) {
        if (i)
            s += "+";
        s += grouping[i].cluster_id + ":" + std::to_string(grouping[i].core_count);
    }
    return s;
}

std::string landscape_csv(const DseOutcome& outcome) {
    std::string csv = "grouping,stages,bottleneck_s,throughput_ips\n";
    for (const auto& point : outcome.landscape) {
        csv += grouping_to_string(point.grouping);
        csv += ",";
        csv += std::to_string(point.grouping.size());
        csv += ",";
        csv += format_double(point.bottleneck_s);
        csv += ",";
        csv += format_double(point.throughput_ips);
        csv += "\n";
    }
    return csv;
}

}  // namespace hetplan::pipeline
