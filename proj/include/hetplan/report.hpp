#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hetplan/coexec.hpp"
#include "hetplan/gpu_model.hpp"
#include "hetplan/pipeline.hpp"
#include "hetplan/thermal.hpp"

namespace hetplan::report {

inline constexpr const char* kToolName = "hetplan";
inline constexpr const char* kToolVersion = "0.1.0";

std::string read_file(const std::string& path);                    // IoError on failure
void write_file(const std::string& path, std::string_view data);   // IoError on failure

// Content digest used to make reports self-describing.
std::string fnv1a64_hex(std::string_view bytes);

nlohmann::ordered_json json_of(const gpu::GpuPrediction& pred);
nlohmann::ordered_json json_of(const thermal::ThermalOutcome& outcome,
                               const std::vector<std::string>& pe_ids);
nlohmann::ordered_json json_of(const coexec::CoexecPlan& plan);
nlohmann::ordered_json json_of(const coexec::DseResult& result, coexec::Objective objective);
nlohmann::ordered_json json_of(const pipeline::PipelineConfig& config,
                               const pipeline::ThroughputReport& report);

// Reports carry no timestamps; identical inputs yield byte-identical output.
struct InputRecord {
    std::string role;  // e.g. "platform"
    std::string path;
    std::string digest;
};

std::string render_report(const std::string& subcommand, const std::vector<InputRecord>& inputs,
                          nlohmann::ordered_json result, const std::vector<std::string>& warnings);

}  // namespace hetplan::report
