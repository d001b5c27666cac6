#pragma once

#include <map>
#include <string>

#include "hetplan/platform.hpp"

namespace hetplan::power {

struct ScaledRuntime {
    std::string pe_id;
    double freq_hz = 0.0;
    double seconds = 0.0;
};

struct PowerEstimate {
    std::string pe_id;
    double freq_hz = 0.0;
    double active_watts = 0.0;  // dynamic + static while busy
    double static_watts = 0.0;
};

// Runtime extrapolation from the single profile run: the compute-bound
// fraction rho scales inversely with frequency, the rest is invariant.
//   t(f) = t_s * (rho * f_s / f + (1 - rho))
ScaledRuntime scale_runtime(const ProcessingElement& pe, const ProfileEntry& prof,
                            int target_opp_index);

// Closes the power model from the profile when the platform document carries
// no c_eff_farads: C_eff = (P_sample - P_static) / (V_s^2 * f_s).
double calibrate_ceff(const ProcessingElement& pe, const ProfileEntry& prof);

// Explicit platform value wins; otherwise calibrate from the profile entry
// (which may be null only if the platform value exists).
double resolved_ceff(const ProcessingElement& pe, const ProfileEntry* prof);

// active = C_eff * V^2 * f + P_static at the given operating point.
PowerEstimate power_at(const ProcessingElement& pe, int opp_index);
PowerEstimate power_at(const ProcessingElement& pe, int opp_index, double c_eff_farads);

struct Assignment {
    double active_watts = 0.0;
    double static_watts = 0.0;
    double busy_s = 0.0;
};

struct EnergyReport {
    std::map<std::string, double> per_pe_joules;
    double total_joules = 0.0;
    double makespan_s = 0.0;
};

// Busy PEs burn active power for busy_s and static power for the rest of the
// makespan; PEs absent from `assignments` idle at static power throughout.
EnergyReport energy(const PlatformDescription& platform,
                    const std::map<std::string, Assignment>& assignments, double makespan_s);

}  // namespace hetplan::power
