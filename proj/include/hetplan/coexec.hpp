#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hetplan/platform.hpp"
#include "hetplan/thermal.hpp"

namespace hetplan::coexec {

struct SplitDecision {
    std::vector<double> fractions;  // aligned with the active PE order, sum to 1
    int chunk_count = 0;            // 0 while still continuous
    std::vector<int> chunks;        // integer allocation, sums to chunk_count
};

enum class Objective { Runtime, Energy, Edp };

const char* to_string(Objective objective);
Objective objective_from_string(const std::string& name);

struct Constraints {
    std::optional<double> max_temp_c;
    std::optional<double> max_runtime_s;
};

struct CoexecPlan {
    std::vector<std::string> active_pes;
    std::vector<int> opp_indices;  // aligned with active_pes
    SplitDecision split;
    double predicted_runtime_s = 0.0;
    double predicted_energy_j = 0.0;
    std::optional<thermal::ThermalOutcome> thermal;
    double objective_value = 0.0;  // runtime unless set by a DSE objective
};

// base * kappa(pe, active set); 1 for singleton sets and unlisted combinations.
double contention_adjust(double base_runtime_s, const std::string& pe_id,
                         const std::vector<std::string>& active_set,
                         const ContentionSpec& contention);

// Equal-finish-time fractions: beta_i = (1/t_i) / sum_j (1/t_j). The implied
// continuous co-run makespan is 1 / sum_j (1/t_j).
SplitDecision optimal_split(const std::vector<double>& adjusted_runtimes_s);

// Integer chunks minimizing max_i (n_i / N) * t_i with sum n_i = N. Exhaustive
// for <= 2 PEs; largest-remainder seed plus hill-climb otherwise. Ties resolve
// to the lexicographically smallest chunk vector.
SplitDecision discretize_split(const SplitDecision& continuous,
                               const std::vector<double>& adjusted_runtimes_s, int chunk_count);

double continuous_corun_seconds(const std::vector<double>& adjusted_runtimes_s);

// scale_runtime -> contention_adjust -> optimal_split -> discretize_split;
// runtime is the max per-PE share, replaced by the governor simulation when
// thermal_enabled. Energy accounts idle PEs at static power for the makespan.
CoexecPlan predict_coexec(const PlatformDescription& platform, const KernelProfile& profile,
                          const std::vector<std::string>& active_pes,
                          const std::vector<int>& opp_indices, int chunk_count,
                          bool thermal_enabled);

struct DseResult {
    std::optional<CoexecPlan> best;       // empty when no point satisfies constraints
    std::vector<CoexecPlan> pareto;       // non-dominated in (runtime, energy); ties kept
    std::size_t evaluated_count = 0;
};

// Evaluates every non-empty subset of profiled PEs crossed with the Cartesian
// product of their OPP tables. Best is the argmin of the objective with ties
// broken by design-space order (lexicographic over PE-index set, then OPP
// indices). `jobs` only parallelizes evaluation; results are identical for
// any worker count.
DseResult exhaustive_dse(const PlatformDescription& platform, const KernelProfile& profile,
                         Objective objective, const Constraints& constraints, int chunk_count,
                         bool thermal_enabled, int jobs = 1);

// CSV export of the Pareto set: `runtime_s,energy_j,peset,opps,chunks`.
std::string pareto_csv(const DseResult& result);

}  // namespace hetplan::coexec
