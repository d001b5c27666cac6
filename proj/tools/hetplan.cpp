#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hetplan/coexec.hpp"
#include "hetplan/errors.hpp"
#include "hetplan/gpu_model.hpp"
#include "hetplan/pipeline.hpp"
#include "hetplan/report.hpp"
#include "hetplan/thermal.hpp"
#include "hetplan/trace.hpp"

namespace {

using hetplan::report::InputRecord;
using ojson = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

struct LoadedInput {
    std::string text;
    InputRecord record;
};

LoadedInput load_input(const std::string& role, const std::string& path) {
    LoadedInput in;
    in.text = hetplan::report::read_file(path);
    in.record = {role, path, hetplan::report::fnv1a64_hex(in.text)};
    return in;
}

void emit(const std::string& report, const std::string& out_path) {
    if (out_path.empty())
        std::fputs(report.c_str(), stdout);
    else
        hetplan::report::write_file(out_path, report);
}

struct GpuArgs {
    std::string trace_path, platform_path, pe_id, out_path;
    std::int64_t threads = 1;
    double freq_hz = 0.0;
};

int run_predict_gpu(const GpuArgs& args, bool verbose) {
    LoadedInput trace_in = load_input("trace", args.trace_path);
    LoadedInput platform_in = load_input("platform", args.platform_path);

    hetplan::PlatformDescription platform = hetplan::load_platform(platform_in.text);
    const hetplan::ProcessingElement& pe = platform.pe(args.pe_id);
    if (pe.kind != hetplan::PeKind::Gpu)
        throw hetplan::ValidationError(args.pe_id, "not a gpu PE");

    hetplan::gpu::TraceProgram prog = hetplan::gpu::parse_trace(trace_in.text);
    hetplan::gpu::GpuPrediction pred =
        hetplan::gpu::predict(prog, *pe.gpu_params, args.threads, args.freq_hz);

    if (verbose)
        std::cerr << "predicted " << pred.total_cycles << " cycles ("
                  << pred.seconds_at_freq << " s at " << args.freq_hz << " Hz)\n";

    emit(hetplan::report::render_report("predict-gpu", {trace_in.record, platform_in.record},
                                        hetplan::report::json_of(pred), {}),
         args.out_path);
    return kExitOk;
}

struct CoexecArgs {
    std::string profile_path, platform_path, out_path, pareto_csv_path;
    std::string objective = "runtime";
    int chunks = 64;
    bool thermal = false;
    double max_temp_c = 0.0;
    double max_runtime_s = 0.0;
    bool has_max_temp = false;
    bool has_max_runtime = false;
};

int run_plan_coexec(const CoexecArgs& args, int jobs, bool verbose) {
    LoadedInput profile_in = load_input("profile", args.profile_path);
    LoadedInput platform_in = load_input("platform", args.platform_path);

    hetplan::PlatformDescription platform = hetplan::load_platform(platform_in.text);
    hetplan::KernelProfile profile = hetplan::load_profile(profile_in.text, platform);

    hetplan::coexec::Constraints constraints;
    if (args.has_max_temp)
        constraints.max_temp_c = args.max_temp_c;
    if (args.has_max_runtime)
        constraints.max_runtime_s = args.max_runtime_s;

    hetplan::coexec::Objective objective = hetplan::coexec::objective_from_string(args.objective);
    hetplan::coexec::DseResult result = hetplan::coexec::exhaustive_dse(
        platform, profile, objective, constraints, args.chunks, args.thermal, jobs);

    if (verbose) {
        std::cerr << "evaluated " << result.evaluated_count << " design points\n";
        if (result.best)
            std::cerr << "best " << args.objective << " = " << result.best->objective_value
                      << "\n";
        else
            std::cerr << "no feasible configuration\n";
    }

    if (!args.pareto_csv_path.empty())
        hetplan::report::write_file(args.pareto_csv_path, hetplan::coexec::pareto_csv(result));

    emit(hetplan::report::render_report("plan-coexec", {profile_in.record, platform_in.record},
                                        hetplan::report::json_of(result, objective), {}),
         args.out_path);
    return result.best ? kExitOk : kExitInfeasible;
}

struct PipelineArgs {
    std::string network_path, platform_path, out_path, landscape_csv_path;
    int max_stages = 4;
    std::vector<std::string> opp_specs;  // cluster=index
};

int run_plan_pipeline(const PipelineArgs& args, bool verbose) {
    LoadedInput network_in = load_input("network", args.network_path);
    LoadedInput platform_in = load_input("platform", args.platform_path);

    hetplan::PlatformDescription platform = hetplan::load_platform(platform_in.text);
    hetplan::NetworkDescription network = hetplan::load_network(network_in.text);

    // Default every cluster to its top OPP; --opp cluster=index overrides.
    std::map<std::string, int> opps;
    for (const auto& pe : platform.pes)
        if (pe.kind == hetplan::PeKind::CpuCluster)
            opps[pe.id] = static_cast<int>(pe.opps.size()) - 1;
    for (const auto& spec : args.opp_specs) {
        size_t eq = spec.find('=');
        if (eq == std::string::npos)
            throw hetplan::ValidationError("--opp", "expected cluster=index, got '" + spec + "'");
        std::string cluster = spec.substr(0, eq);
        int index = 0;
        try {
            index = std::stoi(spec.substr(eq + 1));
        } catch (...) {
            throw hetplan::ValidationError("--opp", "bad opp index in '" + spec + "'");
        }
        platform.pe(cluster).opp_at(index, cluster + ".opps");
        opps[cluster] = index;
    }

    hetplan::pipeline::DseOutcome outcome =
        hetplan::pipeline::dse(network, platform, opps, args.max_stages);

    if (verbose)
        std::cerr << "best throughput " << outcome.report.throughput_ips << " ips over "
                  << outcome.landscape.size() << " groupings\n";

    if (!args.landscape_csv_path.empty())
        hetplan::report::write_file(args.landscape_csv_path,
                                    hetplan::pipeline::landscape_csv(outcome));

    emit(hetplan::report::render_report("plan-pipeline", {network_in.record, platform_in.record},
                                        hetplan::report::json_of(outcome.best, outcome.report),
                                        {}),
         args.out_path);
    return kExitOk;
}

struct ThermalArgs {
    std::string platform_path, profile_path, config, out_path, timeline_csv_path;
};

int run_simulate_thermal(const ThermalArgs& args, bool verbose) {
    LoadedInput platform_in = load_input("platform", args.platform_path);
    LoadedInput profile_in = load_input("profile", args.profile_path);

    // --config accepts a file path or an inline JSON object.
    std::string config_text;
    InputRecord config_record;
    if (!args.config.empty() && args.config.front() == '{') {
        config_text = args.config;
        config_record = {"config", "<inline>", hetplan::report::fnv1a64_hex(config_text)};
    } else {
        LoadedInput config_in = load_input("config", args.config);
        config_text = config_in.text;
        config_record = config_in.record;
    }

    hetplan::PlatformDescription platform = hetplan::load_platform(platform_in.text);
    hetplan::KernelProfile profile = hetplan::load_profile(profile_in.text, platform);

    nlohmann::json config_doc;
    try {
        config_doc = nlohmann::json::parse(config_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw hetplan::ParseError(e.what());
    }
    if (!config_doc.contains("assignments") || !config_doc["assignments"].is_array() ||
        config_doc["assignments"].empty())
        throw hetplan::ValidationError("assignments", "expected a non-empty array");

    std::vector<hetplan::thermal::WorkItem> work;
    std::vector<std::string> pe_ids;
    for (size_t i = 0; i < config_doc["assignments"].size(); ++i) {
        const auto& a = config_doc["assignments"][i];
        std::string path = "assignments[" + std::to_string(i) + "]";
        if (!a.contains("pe") || !a["pe"].is_string())
            throw hetplan::ValidationError(path + ".pe", "expected a string");
        if (!a.contains("opp_index") || !a["opp_index"].is_number_integer())
            throw hetplan::ValidationError(path + ".opp_index", "expected an integer");
        if (!a.contains("work_fraction") || !a["work_fraction"].is_number())
            throw hetplan::ValidationError(path + ".work_fraction", "expected a number");
        work.push_back({a["pe"].get<std::string>(), a["opp_index"].get<int>(),
                        a["work_fraction"].get<double>()});
        pe_ids.push_back(work.back().pe_id);
    }

    hetplan::thermal::ThermalOutcome outcome =
        hetplan::thermal::simulate_with_governor(platform, profile, work);

    if (verbose)
        std::cerr << "effective runtime " << outcome.effective_runtime_s << " s, "
                  << outcome.events.size() << " governor events, peak "
                  << outcome.peak_temp_c << " C\n";

    if (!args.timeline_csv_path.empty())
        hetplan::report::write_file(args.timeline_csv_path,
                                    hetplan::thermal::timeline_csv(outcome, pe_ids));

    emit(hetplan::report::render_report(
             "simulate-thermal", {platform_in.record, profile_in.record, config_record},
             hetplan::report::json_of(outcome, pe_ids), {}),
         args.out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Offline planning and simulation toolkit for heterogeneous MPSoCs"};
    app.require_subcommand(1);
    app.fallthrough();

    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1)
        jobs = 1;
    bool verbose = false;
    app.add_option("--jobs", jobs, "Worker threads for design-space search")
        ->check(CLI::PositiveNumber);
    app.add_flag("--verbose", verbose, "Human-readable summary on stderr");

    GpuArgs gpu_args;
    CLI::App* gpu_cmd =
        app.add_subcommand("predict-gpu", "Predict kernel performance on an embedded GPU");
    gpu_cmd->add_option("--trace", gpu_args.trace_path, "Trace DSL file")->required();
    gpu_cmd->add_option("--platform", gpu_args.platform_path, "Platform JSON")->required();
    gpu_cmd->add_option("--pe", gpu_args.pe_id, "GPU processing element id")->required();
    gpu_cmd->add_option("--threads", gpu_args.threads, "Total 1-D thread count")->required();
    gpu_cmd->add_option("--freq", gpu_args.freq_hz, "Clock frequency in Hz")->required();
    gpu_cmd->add_option("--out", gpu_args.out_path, "Write the JSON report here");

    CoexecArgs coexec_args;
    CLI::App* coexec_cmd =
        app.add_subcommand("plan-coexec", "Search workload splits and DVFS settings");
    coexec_cmd->add_option("--profile", coexec_args.profile_path, "Kernel profile JSON")
        ->required();
    coexec_cmd->add_option("--platform", coexec_args.platform_path, "Platform JSON")->required();
    coexec_cmd->add_option("--objective", coexec_args.objective,
                           "runtime | energy | edp (default runtime)");
    coexec_cmd->add_option("--chunks", coexec_args.chunks, "Workload chunk count (default 64)");
    coexec_cmd->add_flag("--thermal", coexec_args.thermal,
                         "Fold governor throttling into predictions");
    CLI::Option* mt = coexec_cmd->add_option("--max-temp", coexec_args.max_temp_c,
                                             "Peak temperature constraint (C)");
    CLI::Option* mr = coexec_cmd->add_option("--max-runtime", coexec_args.max_runtime_s,
                                             "Runtime constraint (s)");
    coexec_cmd->add_option("--pareto-csv", coexec_args.pareto_csv_path,
                           "Write the Pareto front CSV here");
    coexec_cmd->add_option("--out", coexec_args.out_path, "Write the JSON report here");

    PipelineArgs pipeline_args;
    CLI::App* pipeline_cmd =
        app.add_subcommand("plan-pipeline", "Find the best streaming CNN pipeline");
    pipeline_cmd->add_option("--network", pipeline_args.network_path, "Network JSON")->required();
    pipeline_cmd->add_option("--platform", pipeline_args.platform_path, "Platform JSON")
        ->required();
    pipeline_cmd->add_option("--max-stages", pipeline_args.max_stages,
                             "Stage budget (default 4)");
    pipeline_cmd->add_option("--opp", pipeline_args.opp_specs,
                             "Per-cluster OPP as cluster=index (default: top OPP)");
    pipeline_cmd->add_option("--landscape-csv", pipeline_args.landscape_csv_path,
                             "Write per-grouping results here");
    pipeline_cmd->add_option("--out", pipeline_args.out_path, "Write the JSON report here");

    ThermalArgs thermal_args;
    CLI::App* thermal_cmd =
        app.add_subcommand("simulate-thermal", "Run the throttling governor simulation");
    thermal_cmd->add_option("--platform", thermal_args.platform_path, "Platform JSON")
        ->required();
    thermal_cmd->add_option("--profile", thermal_args.profile_path, "Kernel profile JSON")
        ->required();
    thermal_cmd->add_option("--config", thermal_args.config,
                            "Assignment JSON (file path or inline object)")
        ->required();
    thermal_cmd->add_option("--timeline-csv", thermal_args.timeline_csv_path,
                            "Write the temperature timeline here");
    thermal_cmd->add_option("--out", thermal_args.out_path, "Write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (gpu_cmd->parsed())
            return run_predict_gpu(gpu_args, verbose);
        if (coexec_cmd->parsed()) {
            coexec_args.has_max_temp = mt->count() > 0;
            coexec_args.has_max_runtime = mr->count() > 0;
            return run_plan_coexec(coexec_args, jobs, verbose);
        }
        if (pipeline_cmd->parsed())
            return run_plan_pipeline(pipeline_args, verbose);
        if (thermal_cmd->parsed())
            return run_simulate_thermal(thermal_args, verbose);
    } catch (const hetplan::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const hetplan::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
