#pragma once

#include <string>
#include <vector>

#include "hetplan/platform.hpp"

namespace hetplan::thermal {

// Closed form of the lumped RC node  dT/dt = (P*R - (T - T_amb)) / (R*C):
//   T(dt) = T_amb + P*R + (t0 - T_amb - P*R) * exp(-dt / (R*C))
double step_temperature(double t0_c, double power_w, const ThermalParams& params, double dt_s);

// T_amb + R*P.
double steady_state(double power_w, const ThermalParams& params);

// True iff the steady-state temperature strictly exceeds the trip point.
bool will_throttle(double total_power_w, const ThermalParams& params);

struct OppChange {
    std::string pe_id;
    int from_opp = 0;
    int to_opp = 0;
};

struct ThrottleEvent {
    enum class Reason { Trip, Recover };
    double time_s = 0.0;
    Reason reason = Reason::Trip;
    std::vector<OppChange> changes;
};

struct TimelinePoint {
    double time_s = 0.0;
    double temp_c = 0.0;
    std::vector<int> opp_indices;  // config order; a finished PE keeps its last index
};

// One PE's share of a co-executed kernel.
struct WorkItem {
    std::string pe_id;
    int opp_index = 0;        // target OPP; throttling may pull below, never above
    double work_fraction = 0.0;
};

struct PeOutcome {
    std::string pe_id;
    double completion_s = 0.0;
    double active_energy_j = 0.0;
    double mean_active_watts = 0.0;
};

struct ThermalOutcome {
    double effective_runtime_s = 0.0;
    bool throttled = false;
    std::vector<ThrottleEvent> events;
    std::vector<TimelinePoint> timeline;
    double peak_temp_c = 0.0;
    std::vector<PeOutcome> per_pe;  // config order
};

// Event-driven simulation of a single lumped thermal node heated by the sum
// of the active PEs' power. At every governor period: T >= t_trip drops all
// active PEs one OPP index (floor 0); T <= t_trip - hysteresis raises PEs
// below target one index. Work progresses at the contention-adjusted
// scale_runtime rate of the instantaneous OPP; a PE stops contributing power
// once its share completes. Starts from ambient temperature.
ThermalOutcome simulate_with_governor(const PlatformDescription& platform,
                                      const KernelProfile& profile,
                                      const std::vector<WorkItem>& config);

// CSV export: header `time_s,temp_c,opp_index_<pe>...` in config order.
std::string timeline_csv(const ThermalOutcome& outcome, const std::vector<std::string>& pe_ids);

}  // namespace hetplan::thermal
