#include "hetplan/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hetplan/fmt.hpp"
#include "hetplan/perfpower.hpp"

namespace hetplan::thermal {

double step_temperature(double t0_c, double power_w, const ThermalParams& params, double dt_s) {
    if (dt_s < 0)
        throw ValidationError("dt_s", "must be >= 0");
    double t_inf = params.t_amb_c + power_w * params.r_th_k_per_w;
    double tau = params.r_th_k_per_w * params.c_th_j_per_k;
    return t_inf + (t0_c - t_inf) * std::exp(-dt_s / tau);
}

double steady_state(double power_w, const ThermalParams& params) {
    return params.t_amb_c + params.r_th_k_per_w * power_w;
}

bool will_throttle(double total_power_w, const ThermalParams& params) {
    return steady_state(total_power_w, params) > params.t_trip_c;
}

namespace {

constexpr double kDone = std::numeric_limits<double>::infinity();

struct PeState {
    const ProcessingElement* pe = nullptr;
    const ProfileEntry* prof = nullptr;
    double kappa = 1.0;
    double c_eff = 0.0;
    int target_opp = 0;
    int opp = 0;
    bool done = false;
    bool ever_rescaled = false;
    double t_done = 0.0;        // absolute completion time under the current OPP
    double seg_start = 0.0;     // when the current OPP segment began
    double power = 0.0;         // active power at the current OPP
    double energy_j = 0.0;
    double completion_s = 0.0;

    // Full-kernel adjusted runtime at an OPP index.
    double adjusted_runtime(int opp_index) const {
        return power::scale_runtime(*pe, *prof, opp_index).seconds * kappa;
    }
};

}  // namespace

ThermalOutcome simulate_with_governor(const PlatformDescription& platform,
                                      const KernelProfile& profile,
                                      const std::vector<WorkItem>& config) {
    const ThermalParams& tp = platform.thermal;
    if (config.empty())
        throw ValidationError("config", "must name at least one pe");
    if (tp.governor_period_s <= 0)
        throw ValidationError("thermal.governor_period_s", "must be > 0");

    std::vector<std::string> active_ids;
    for (const auto& item : config)
        active_ids.push_back(item.pe_id);

    std::vector<PeState> pes;
    for (size_t i = 0; i < config.size(); ++i) {
        const WorkItem& item = config[i];
        for (size_t k = 0; k < i; ++k)
            if (config[k].pe_id == item.pe_id)
                throw ValidationError("config", "duplicate pe '" + item.pe_id + "'");
        if (item.work_fraction < 0 || !std::isfinite(item.work_fraction))
            throw ValidationError("config", "work_fraction must be finite and >= 0");

        PeState st;
        st.pe = &platform.pe(item.pe_id);
        st.prof = &profile.entry(item.pe_id);
        st.pe->opp_at(item.opp_index, item.pe_id + ".opps");
        st.kappa = platform.contention.factor(item.pe_id, active_ids);
        st.c_eff = power::resolved_ceff(*st.pe, st.prof);
        st.target_opp = item.opp_index;
        st.opp = item.opp_index;
        st.t_done = item.work_fraction * st.adjusted_runtime(st.opp);
        st.power = power::power_at(*st.pe, st.opp, st.c_eff).active_watts;
        pes.push_back(st);
    }

    ThermalOutcome out;
    double t_now = 0.0;
    double temp = tp.t_amb_c;
    out.peak_temp_c = temp;
    long sample = 1;  // next governor sample is sample * period

    auto total_power = [&]() {
        double p = 0.0;
        for (const auto& st : pes)
            if (!st.done)
                p += st.power;
        return p;
    };
    auto record = [&]() {
        TimelinePoint pt;
        pt.time_s = t_now;
        pt.temp_c = temp;
        for (const auto& st : pes)
            pt.opp_indices.push_back(st.opp);
        out.timeline.push_back(std::move(pt));
    };
    auto all_done = [&]() {
        return std::all_of(pes.begin(), pes.end(), [](const PeState& s) { return s.done; });
    };

    record();

    while (!all_done()) {
        double next_done = kDone;
        for (const auto& st : pes)
            if (!st.done)
                next_done = std::min(next_done, st.t_done);
        double next_sample = static_cast<double>(sample) * tp.governor_period_s;
        double t_next = std::min(next_done, next_sample);

        temp = step_temperature(temp, total_power(), tp, t_next - t_now);
        t_now = t_next;
        out.peak_temp_c = std::max(out.peak_temp_c, temp);

        bool changed = false;
        if (next_done <= t_next) {
            for (auto& st : pes) {
                if (!st.done && st.t_done <= t_now) {
                    st.energy_j += st.power * (st.t_done - st.seg_start);
                    st.completion_s = st.t_done;
                    st.done = true;
                    changed = true;
                }
            }
        }

        if (t_now == next_sample) {
            ThrottleEvent ev;
            ev.time_s = t_now;
            if (temp >= tp.t_trip_c) {
                ev.reason = ThrottleEvent::Reason::Trip;
                for (auto& st : pes) {
                    if (st.done || st.opp == 0)
                        continue;
                    ev.changes.push_back({st.pe->id, st.opp, st.opp - 1});
                }
            } else if (temp <= tp.t_trip_c - tp.hysteresis_c) {
                ev.reason = ThrottleEvent::Reason::Recover;
                for (auto& st : pes) {
                    if (st.done || st.opp >= st.target_opp)
                        continue;
                    ev.changes.push_back({st.pe->id, st.opp, st.opp + 1});
                }
            }
            if (!ev.changes.empty()) {
                for (const auto& ch : ev.changes) {
                    for (auto& st : pes) {
                        if (st.pe->id != ch.pe_id)
                            continue;
                        double remaining = st.t_done - t_now;
                        double t_old = st.adjusted_runtime(st.opp);
                        double t_new = st.adjusted_runtime(ch.to_opp);
                        st.energy_j += st.power * (t_now - st.seg_start);
                        st.seg_start = t_now;
                        st.opp = ch.to_opp;
                        st.t_done = t_now + remaining * (t_new / t_old);
                        st.power = power::power_at(*st.pe, st.opp, st.c_eff).active_watts;
                        st.ever_rescaled = true;
                    }
                }
                out.events.push_back(std::move(ev));
                changed = true;
            }
            ++sample;
            changed = true;  // governor samples always get a timeline row
        }
        if (changed)
            record();
    }

    out.effective_runtime_s = t_now;
    out.throttled = std::any_of(out.events.begin(), out.events.end(), [](const ThrottleEvent& e) {
        return e.reason == ThrottleEvent::Reason::Trip;
    });

    for (const auto& st : pes) {
        PeOutcome po;
        po.pe_id = st.pe->id;
        po.completion_s = st.completion_s;
        po.active_energy_j = st.energy_j;
        // A PE that never changed OPP ran one segment: its mean power is the
        // OPP power verbatim, not energy/busy.
        if (!st.ever_rescaled)
            po.mean_active_watts = st.power;
        else if (st.completion_s > 0)
            po.mean_active_watts = st.energy_j / st.completion_s;
        else
            po.mean_active_watts = st.pe->p_static_watts;
        out.per_pe.push_back(po);
    }
    return out;
}

std::string timeline_csv(const ThermalOutcome& outcome, const std::vector<std::string>& pe_ids) {
    std::string csv = "time_s,temp_c";
    for (const auto& id : pe_ids)
        csv += ",opp_index_" + id;
    csv += "\n";
    for (const auto& pt : outcome.timeline) {
        csv += format_double(pt.time_s);
        csv += ",";
        csv += format_double(pt.temp_c);
        for (int opp : pt.opp_indices) {
            csv += ",";
            csv += std::to_string(opp);
        }
        csv += "\n";
    }
    return csv;
}

}  // namespace hetplan::thermal
