#include "hetplan/report.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "hetplan/errors.hpp"

namespace hetplan::report {

using ojson = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("read failed for '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out = "fnv1a64:";
    for (int shift = 60; shift >= 0; shift -= 4)
        out += digits[(hash >> shift) & 0xf];
    return out;
}

ojson json_of(const gpu::GpuPrediction& pred) {
    ojson warps = ojson::array();
    for (const auto& w : pred.warps) {
        ojson jw;
        jw["warp_id"] = w.warp_id;
        jw["size"] = w.size;
        jw["compute_cycles"] = w.compute_cycles;
        jw["transactions"] = w.transactions;
        jw["hits"] = w.hits;
        jw["misses"] = w.misses;
        jw["mem_stall_cycles"] = w.mem_stall_cycles;
        warps.push_back(jw);
    }
    ojson j;
    j["total_cycles"] = pred.total_cycles;
    j["compute_cycles_total"] = pred.compute_cycles_total;
    j["mem_transactions_total"] = pred.mem_transactions_total;
    j["mem_cycles_total"] = pred.mem_cycles_total;
    j["mwp"] = pred.mwp;
    j["seconds_at_freq"] = pred.seconds_at_freq;
    j["warps"] = warps;
    return j;
}

ojson json_of(const thermal::ThermalOutcome& outcome, const std::vector<std::string>& pe_ids) {
    ojson events = ojson::array();
    for (const auto& ev : outcome.events) {
        ojson je;
        je["time_s"] = ev.time_s;
        je["reason"] = ev.reason == thermal::ThrottleEvent::Reason::Trip ? "trip" : "recover";
        ojson changes = ojson::array();
        for (const auto& ch : ev.changes) {
            ojson jc;
            jc["pe"] = ch.pe_id;
            jc["from_opp"] = ch.from_opp;
            jc["to_opp"] = ch.to_opp;
            changes.push_back(jc);
        }
        je["changes"] = changes;
        events.push_back(je);
    }

    ojson timeline = ojson::array();
    for (const auto& pt : outcome.timeline) {
        ojson jp;
        jp["time_s"] = pt.time_s;
        jp["temp_c"] = pt.temp_c;
        jp["opp_indices"] = pt.opp_indices;
        timeline.push_back(jp);
    }

    ojson per_pe = ojson::array();
    for (const auto& po : outcome.per_pe) {
        ojson jp;
        jp["pe"] = po.pe_id;
        jp["completion_s"] = po.completion_s;
        jp["active_energy_j"] = po.active_energy_j;
        per_pe.push_back(jp);
    }

    ojson j;
    j["effective_runtime_s"] = outcome.effective_runtime_s;
    j["throttled"] = outcome.throttled;
    j["peak_temp_c"] = outcome.peak_temp_c;
    j["pes"] = pe_ids;
    j["events"] = events;
    j["per_pe"] = per_pe;
    j["timeline"] = timeline;
    return j;
}

ojson json_of(const coexec::CoexecPlan& plan) {
    ojson j;
    j["active_pes"] = plan.active_pes;
    j["opp_indices"] = plan.opp_indices;
    j["fractions"] = plan.split.fractions;
    j["chunk_count"] = plan.split.chunk_count;
    j["chunks"] = plan.split.chunks;
    j["predicted_runtime_s"] = plan.predicted_runtime_s;
    j["predicted_energy_j"] = plan.predicted_energy_j;
    j["objective_value"] = plan.objective_value;
    if (plan.thermal)
        j["thermal"] = json_of(*plan.thermal, plan.active_pes);
    else
        j["thermal"] = nullptr;
    return j;
}

ojson json_of(const coexec::DseResult& result, coexec::Objective objective) {
    ojson j;
    j["objective"] = coexec::to_string(objective);
    j["evaluated_count"] = result.evaluated_count;
    j["feasible"] = result.best.has_value();
    j["best"] = result.best ? json_of(*result.best) : ojson(nullptr);
    ojson pareto = ojson::array();
    for (const auto& plan : result.pareto)
        pareto.push_back(json_of(plan));
    j["pareto"] = pareto;
    return j;
}

ojson json_of(const pipeline::PipelineConfig& config, const pipeline::ThroughputReport& report) {
    ojson stages = ojson::array();
    for (const auto& st : config.stages) {
        ojson js;
        js["cluster"] = st.group.cluster_id;
        js["cores"] = st.group.core_count;
        js["first_layer"] = st.first_layer;
        js["last_layer"] = st.last_layer;
        stages.push_back(js);
    }
    ojson opps = ojson::object();
    for (const auto& [cluster, opp] : config.opp_index_per_cluster)
        opps[cluster] = opp;

    ojson j;
    j["stages"] = stages;
    j["opp_index_per_cluster"] = opps;
    j["throughput_ips"] = report.throughput_ips;
    j["bottleneck_stage_index"] = report.bottleneck_stage_index;
    j["stage_latency_s"] = report.stage_latency_s;
    j["end_to_end_latency_s"] = report.end_to_end_latency_s;
    return j;
}

std::string render_report(const std::string& subcommand, const std::vector<InputRecord>& inputs,
                          ojson result, const std::vector<std::string>& warnings) {
    ojson j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["subcommand"] = subcommand;
    ojson jin = ojson::object();
    for (const auto& rec : inputs) {
        ojson ji;
        ji["path"] = rec.path;
        ji["digest"] = rec.digest;
        jin[rec.role] = ji;
    }
    j["inputs"] = jin;
    j["result"] = std::move(result);
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

}  // namespace hetplan::report
