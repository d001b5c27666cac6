#include "hetplan/perfpower.hpp"

namespace hetplan::power {

ScaledRuntime scale_runtime(const ProcessingElement& pe, const ProfileEntry& prof,
                            int target_opp_index) {
    const Opp& target = pe.opp_at(target_opp_index, pe.id + ".opps");
    const Opp& sample = pe.opp_at(prof.sample_opp_index, pe.id + ".opps");
    // Arranged so t(f_sample) == t_sample exactly.
    double seconds =
        prof.t_sample_s * (1.0 + prof.rho * (sample.freq_hz / target.freq_hz - 1.0));
    return {pe.id, target.freq_hz, seconds};
}

double calibrate_ceff(const ProcessingElement& pe, const ProfileEntry& prof) {
    double dynamic = prof.p_sample_w - pe.p_static_watts;
    if (dynamic <= 0)
        throw ValidationError(pe.id + ".p_sample_w",
                              "sample power does not exceed static power; cannot calibrate");
    const Opp& sample = pe.opp_at(prof.sample_opp_index, pe.id + ".opps");
    return dynamic / (sample.voltage_v * sample.voltage_v * sample.freq_hz);
}

double resolved_ceff(const ProcessingElement& pe, const ProfileEntry* prof) {
    if (pe.c_eff_farads)
        return *pe.c_eff_farads;
    if (!prof)
        throw ValidationError(pe.id + ".c_eff_farads",
                              "missing and no profile entry to calibrate from");
    return calibrate_ceff(pe, *prof);
}

PowerEstimate power_at(const ProcessingElement& pe, int opp_index) {
    if (!pe.c_eff_farads)
        throw ValidationError(pe.id + ".c_eff_farads",
                              "missing; calibrate from a profile first");
    return power_at(pe, opp_index, *pe.c_eff_farads);
}

PowerEstimate power_at(const ProcessingElement& pe, int opp_index, double c_eff_farads) {
    const Opp& opp = pe.opp_at(opp_index, pe.id + ".opps");
    double active = c_eff_farads * opp.voltage_v * opp.voltage_v * opp.freq_hz +
                    pe.p_static_watts;
    return {pe.id, opp.freq_hz, active, pe.p_static_watts};
}

EnergyReport energy(const PlatformDescription& platform,
                    const std::map<std::string, Assignment>& assignments, double makespan_s) {
    if (makespan_s < 0)
        throw ValidationError("makespan_s", "must be >= 0");
    EnergyReport report;
    report.makespan_s = makespan_s;
    for (const auto& [pe_id, a] : assignments)
        if (!platform.find_pe(pe_id))
            throw ValidationError("assignments", "unknown pe id '" + pe_id + "'");
    for (const auto& pe : platform.pes) {
        auto it = assignments.find(pe.id);
        double joules;
        if (it == assignments.end()) {
            joules = pe.p_static_watts * makespan_s;
        } else {
            const Assignment& a = it->second;
            if (a.busy_s > makespan_s)
                throw ValidationError(pe.id + ".busy_s", "exceeds makespan");
            joules = a.active_watts * a.busy_s + a.static_watts * (makespan_s - a.busy_s);
        }
        report.per_pe_joules[pe.id] = joules;
        report.total_joules += joules;
    }
    return report;
}

}  // namespace hetplan::power
