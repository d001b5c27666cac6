#include "hetplan/coexec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "hetplan/fmt.hpp"
#include "hetplan/perfpower.hpp"

namespace hetplan::coexec {

const char* to_string(Objective objective) {
    switch (objective) {
    case Objective::Runtime: return "runtime";
    case Objective::Energy: return "energy";
    case Objective::Edp: return "edp";
    }
    return "runtime";
}

Objective objective_from_string(const std::string& name) {
    if (name == "runtime")
        return Objective::Runtime;
    if (name == "energy")
        return Objective::Energy;
    if (name == "edp")
        return Objective::Edp;
    throw ValidationError("objective", "expected runtime, energy or edp, got '" + name + "'");
}

double contention_adjust(double base_runtime_s, const std::string& pe_id,
                         const std::vector<std::string>& active_set,
                         const ContentionSpec& contention) {
    return base_runtime_s * contention.factor(pe_id, active_set);
}

double continuous_corun_seconds(const std::vector<double>& adjusted_runtimes_s) {
    double inv_sum = 0.0;
    for (double t : adjusted_runtimes_s) {
        if (!(t > 0))
            throw ValidationError("adjusted_runtimes", "runtimes must be > 0");
        inv_sum += 1.0 / t;
    }
    return 1.0 / inv_sum;
}

SplitDecision optimal_split(const std::vector<double>& adjusted_runtimes_s) {
    if (adjusted_runtimes_s.empty())
        throw ValidationError("adjusted_runtimes", "need at least one pe");
    double inv_sum = 0.0;
    for (double t : adjusted_runtimes_s) {
        if (!(t > 0))
            throw ValidationError("adjusted_runtimes", "runtimes must be > 0");
        inv_sum += 1.0 / t;
    }
    SplitDecision split;
    for (double t : adjusted_runtimes_s)
        split.fractions.push_back((1.0 / t) / inv_sum);
    return split;
}

namespace {

double makespan_of(const std::vector<int>& chunks, const std::vector<double>& runtimes,
                   int chunk_count) {
    double worst = 0.0;
    for (size_t i = 0; i < chunks.size(); ++i) {
        double share = (static_cast<double>(chunks[i]) / chunk_count) * runtimes[i];
        worst = std::max(worst, share);
    }
    return worst;
}

}  // namespace

SplitDecision discretize_split(const SplitDecision& continuous,
                               const std::vector<double>& adjusted_runtimes_s, int chunk_count) {
    size_t n = adjusted_runtimes_s.size();
    if (continuous.fractions.size() != n)
        throw ValidationError("split", "fraction/runtime size mismatch");
    if (chunk_count < static_cast<int>(n))
        throw ValidationError("chunk_count", "must be >= the number of active pes");

    SplitDecision out;
    out.chunk_count = chunk_count;

    if (n == 1) {
        out.chunks = {chunk_count};
    } else if (n == 2) {
        int best_first = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int c = 0; c <= chunk_count; ++c) {
            double m = makespan_of({c, chunk_count - c}, adjusted_runtimes_s, chunk_count);
            if (m < best) {
                best = m;
                best_first = c;
            }
        }
        out.chunks = {best_first, chunk_count - best_first};
    } else {
        // Largest-remainder apportionment of the continuous fractions.
        std::vector<int> chunks(n);
        std::vector<std::pair<double, size_t>> remainders;
        int assigned = 0;
        for (size_t i = 0; i < n; ++i) {
            double exact = continuous.fractions[i] * chunk_count;
            chunks[i] = static_cast<int>(std::floor(exact));
            assigned += chunks[i];
            remainders.push_back({exact - std::floor(exact), i});
        }
        std::stable_sort(remainders.begin(), remainders.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (int k = 0; k < chunk_count - assigned; ++k)
            ++chunks[remainders[static_cast<size_t>(k) % n].second];

        // Hill-climb: move one chunk off the bottleneck while that improves
        // the makespan.
        for (;;) {
            double current = makespan_of(chunks, adjusted_runtimes_s, chunk_count);
            size_t bottleneck = 0;
            double worst = -1.0;
            for (size_t i = 0; i < n; ++i) {
                double share = (static_cast<double>(chunks[i]) / chunk_count) *
                               adjusted_runtimes_s[i];
                if (share > worst) {
                    worst = share;
                    bottleneck = i;
                }
            }
            if (chunks[bottleneck] == 0)
                break;
            double best = current;
            size_t best_target = n;
            for (size_t j = 0; j < n; ++j) {
                if (j == bottleneck)
                    continue;
                std::vector<int> candidate = chunks;
                --candidate[bottleneck];
                ++candidate[j];
                double m = makespan_of(candidate, adjusted_runtimes_s, chunk_count);
                if (m < best) {
                    best = m;
                    best_target = j;
                }
            }
            if (best_target == n)
                break;
            --chunks[bottleneck];
            ++chunks[best_target];
        }
        out.chunks = chunks;
    }

    for (int c : out.chunks)
        out.fractions.push_back(static_cast<double>(c) / chunk_count);
    return out;
}

CoexecPlan predict_coexec(const PlatformDescription& platform, const KernelProfile& profile,
                          const std::vector<std::string>& active_pes,
                          const std::vector<int>& opp_indices, int chunk_count,
                          bool thermal_enabled) {
    if (active_pes.empty())
        throw ValidationError("active_pes", "must name at least one pe");
    if (active_pes.size() != opp_indices.size())
        throw ValidationError("opp_indices", "must align with active_pes");
    for (size_t i = 0; i < active_pes.size(); ++i)
        for (size_t k = i + 1; k < active_pes.size(); ++k)
            if (active_pes[i] == active_pes[k])
                throw ValidationError("active_pes", "duplicate pe '" + active_pes[i] + "'");

    std::vector<double> adjusted;
    for (size_t i = 0; i < active_pes.size(); ++i) {
        const ProcessingElement& pe = platform.pe(active_pes[i]);
        const ProfileEntry& prof = profile.entry(active_pes[i]);
        double base = power::scale_runtime(pe, prof, opp_indices[i]).seconds;
        adjusted.push_back(contention_adjust(base, pe.id, active_pes, platform.contention));
    }

    CoexecPlan plan;
    plan.active_pes = active_pes;
    plan.opp_indices = opp_indices;
    plan.split = discretize_split(optimal_split(adjusted), adjusted, chunk_count);

    std::vector<double> busy(active_pes.size());
    double runtime = 0.0;
    for (size_t i = 0; i < active_pes.size(); ++i) {
        busy[i] = plan.split.fractions[i] * adjusted[i];
        runtime = std::max(runtime, busy[i]);
    }

    std::map<std::string, power::Assignment> assignments;
    if (thermal_enabled) {
        std::vector<thermal::WorkItem> work;
        for (size_t i = 0; i < active_pes.size(); ++i)
            work.push_back({active_pes[i], opp_indices[i], plan.split.fractions[i]});
        plan.thermal = thermal::simulate_with_governor(platform, profile, work);
        runtime = plan.thermal->effective_runtime_s;
        for (const auto& po : plan.thermal->per_pe)
            assignments[po.pe_id] = {po.mean_active_watts,
                                     platform.pe(po.pe_id).p_static_watts, po.completion_s};
    } else {
        for (size_t i = 0; i < active_pes.size(); ++i) {
            const ProcessingElement& pe = platform.pe(active_pes[i]);
            const ProfileEntry& prof = profile.entry(active_pes[i]);
            double watts =
                power::power_at(pe, opp_indices[i], power::resolved_ceff(pe, &prof)).active_watts;
            assignments[pe.id] = {watts, pe.p_static_watts, busy[i]};
        }
    }

    plan.predicted_runtime_s = runtime;
    plan.predicted_energy_j = power::energy(platform, assignments, runtime).total_joules;
    plan.objective_value = plan.predicted_runtime_s;
    return plan;
}

namespace {

struct DesignPoint {
    std::vector<std::string> pes;
    std::vector<int> opps;
};

// Non-empty subsets of `ids` in lexicographic order over ascending index
// lists: [0] < [0,1] < [0,1,2] < [0,2] < [1] < ...
void enumerate_subsets(const std::vector<std::string>& ids, size_t start,
                       std::vector<std::string>& current,
                       std::vector<std::vector<std::string>>& out) {
    for (size_t i = start; i < ids.size(); ++i) {
        current.push_back(ids[i]);
        out.push_back(current);
        enumerate_subsets(ids, i + 1, current, out);
        current.pop_back();
    }
}

double objective_of(const CoexecPlan& plan, Objective objective) {
    switch (objective) {
    case Objective::Runtime: return plan.predicted_runtime_s;
    case Objective::Energy: return plan.predicted_energy_j;
    case Objective::Edp: return plan.predicted_runtime_s * plan.predicted_energy_j;
    }
    return plan.predicted_runtime_s;
}

// Strictly better in both coordinates. Equal-coordinate plans never dominate
// each other, so the objective-minimal plan is always on the front.
bool dominates(const CoexecPlan& a, const CoexecPlan& b) {
    return a.predicted_runtime_s < b.predicted_runtime_s &&
           a.predicted_energy_j < b.predicted_energy_j;
}

}  // namespace

DseResult exhaustive_dse(const PlatformDescription& platform, const KernelProfile& profile,
                         Objective objective, const Constraints& constraints, int chunk_count,
                         bool thermal_enabled, int jobs) {
    std::vector<std::string> candidate_ids;
    for (const auto& pe : platform.pes)
        if (profile.find(pe.id))
            candidate_ids.push_back(pe.id);
    if (candidate_ids.empty())
        throw ValidationError("profile", "no platform pe has a profile entry");

    std::vector<std::vector<std::string>> subsets;
    std::vector<std::string> current;
    enumerate_subsets(candidate_ids, 0, current, subsets);

    // Odometer increment over OPP indices, last position fastest.
    auto advance = [](std::vector<int>& opps, const std::vector<int>& limits) {
        for (size_t pos = opps.size(); pos-- > 0;) {
            if (++opps[pos] < limits[pos])
                return true;
            opps[pos] = 0;
        }
        return false;
    };

    std::vector<DesignPoint> points;
    for (const auto& subset : subsets) {
        std::vector<int> limits;
        for (const auto& id : subset)
            limits.push_back(static_cast<int>(platform.pe(id).opps.size()));
        std::vector<int> opps(subset.size(), 0);
        do {
            points.push_back({subset, opps});
        } while (advance(opps, limits));
    }

    std::vector<CoexecPlan> plans(points.size());
    std::vector<char> feasible(points.size(), 0);

    int workers = std::max(1, jobs);
    workers = std::min<int>(workers, 64);
    auto evaluate_range = [&](size_t begin, size_t stride) {
        for (size_t i = begin; i < points.size(); i += stride) {
            CoexecPlan plan = predict_coexec(platform, profile, points[i].pes, points[i].opps,
                                             chunk_count, thermal_enabled);
            plan.objective_value = objective_of(plan, objective);

            bool ok = true;
            if (constraints.max_runtime_s && plan.predicted_runtime_s > *constraints.max_runtime_s)
                ok = false;
            if (ok && constraints.max_temp_c) {
                double temp;
                if (plan.thermal) {
                    temp = plan.thermal->peak_temp_c;
                } else {
                    double total = 0.0;
                    for (size_t k = 0; k < points[i].pes.size(); ++k) {
                        const ProcessingElement& pe = platform.pe(points[i].pes[k]);
                        const ProfileEntry& prof = profile.entry(pe.id);
                        total += power::power_at(pe, points[i].opps[k],
                                                 power::resolved_ceff(pe, &prof))
                                     .active_watts;
                    }
                    temp = thermal::steady_state(total, platform.thermal);
                }
                if (temp > *constraints.max_temp_c)
                    ok = false;
            }
            plans[i] = std::move(plan);
            feasible[i] = ok ? 1 : 0;
        }
    };

    if (workers == 1 || points.size() < 2) {
        evaluate_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                try {
                    evaluate_range(static_cast<size_t>(w), static_cast<size_t>(workers));
                } catch (...) {
                    errors[static_cast<size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool)
            t.join();
        for (const auto& err : errors)
            if (err)
                std::rethrow_exception(err);
    }

    DseResult result;
    result.evaluated_count = points.size();

    // Deterministic reduction in design-space order.
    std::optional<size_t> best_index;
    for (size_t i = 0; i < plans.size(); ++i) {
        if (!feasible[i])
            continue;
        if (!best_index || plans[i].objective_value < plans[*best_index].objective_value)
            best_index = i;
    }
    if (best_index)
        result.best = plans[*best_index];

    std::vector<size_t> front;
    for (size_t i = 0; i < plans.size(); ++i) {
        if (!feasible[i])
            continue;
        bool dominated = false;
        for (size_t k = 0; k < plans.size() && !dominated; ++k)
            if (feasible[k] && k != i && dominates(plans[k], plans[i]))
                dominated = true;
        if (!dominated)
            front.push_back(i);
    }
    std::sort(front.begin(), front.end(), [&](size_t a, size_t b) {
        if (plans[a].predicted_runtime_s != plans[b].predicted_runtime_s)
            return plans[a].predicted_runtime_s < plans[b].predicted_runtime_s;
        if (plans[a].predicted_energy_j != plans[b].predicted_energy_j)
            return plans[a].predicted_energy_j < plans[b].predicted_energy_j;
        return a < b;
    });
    for (size_t i : front)
        result.pareto.push_back(plans[i]);
    return result;
}

std::string pareto_csv(const DseResult& result) {
    std::string csv = "runtime_s,energy_j,peset,opps,chunks\n";
    for (const auto& plan : result.pareto) {
        csv += format_double(plan.predicted_runtime_s);
        csv += ",";
        csv += format_double(plan.predicted_energy_j);
        csv += ",";
        for (size_t i = 0; i < plan.active_pes.size(); ++i) {
            if (i)
                csv += "+";
            csv += plan.active_pes[i];
        }
        csv += ",";
        for (size_t i = 0; i < plan.opp_indices.size(); ++i) {
            if (i)
                csv += "|";
            csv += std::to_string(plan.opp_indices[i]);
        }
        csv += ",";
        for (size_t i = 0; i < plan.split.chunks.size(); ++i) {
            if (i)
                csv += "|";
            csv += std::to_string(plan.split.chunks[i]);
        }
        csv += "\n";
    }
    return csv;
}

}  // namespace hetplan::coexec
