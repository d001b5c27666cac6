#include "hetplan/gpu_model.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <unordered_map>
#include <unordered_set>

namespace hetplan::gpu {

namespace {

// tid-symbolic flat instruction: addr(tid) = const_bytes + tid_coeff * tid.
struct TemplInstr {
    FlatInstr::Kind kind = FlatInstr::Kind::Compute;
    std::string op_class;
    std::int64_t count = 0;
    std::int64_t const_bytes = 0;
    std::int64_t tid_coeff = 0;
};

void flatten_template(const std::vector<TraceStmt>& stmts,
                      std::map<std::string, std::int64_t>& env,
                      std::vector<TemplInstr>& out) {
    for (const auto& s : stmts) {
        switch (s.kind) {
        case TraceStmt::Kind::Compute:
            out.push_back({FlatInstr::Kind::Compute, s.op_class, s.count, 0, 0});
            break;
        case TraceStmt::Kind::Load:
        case TraceStmt::Kind::Store: {
            std::int64_t base = s.addr.base_bytes;
            for (const auto& [var, coeff] : s.addr.loop_coeffs)
                base += coeff * env.at(var);
            out.push_back({s.kind == TraceStmt::Kind::Load ? FlatInstr::Kind::Load
                                                           : FlatInstr::Kind::Store,
                           {}, 0, base, s.addr.tid_coeff_bytes});
            break;
        }
        case TraceStmt::Kind::Loop:
            for (std::int64_t v = s.lower; v < s.upper; ++v) {
                env[s.loop_var] = v;
                flatten_template(s.body, env, out);
            }
            env.erase(s.loop_var);
            break;
        }
    }
}

std::vector<TemplInstr> make_template(const TraceProgram& prog) {
    std::vector<TemplInstr> out;
    std::map<std::string, std::int64_t> env;
    flatten_template(prog.stmts, env, out);
    return out;
}

std::uint64_t eval_addr(const TemplInstr& ti, std::int64_t tid) {
    std::int64_t addr = ti.const_bytes + ti.tid_coeff * tid;
    if (addr < 0)
        throw ValidationError("addr", "address evaluates negative (" + std::to_string(addr) +
                                          ") at tid " + std::to_string(tid));
    return static_cast<std::uint64_t>(addr);
}

}  // namespace

std::vector<WarpTrace> form_warps(const TraceProgram& prog, std::int64_t n_threads,
                                  int warp_size) {
    if (n_threads < 1)
        throw ValidationError("n_threads", "must be >= 1");
    if (warp_size < 1)
        throw ValidationError("warp_size", "must be >= 1");

    std::vector<TemplInstr> templ = make_template(prog);
    std::vector<WarpTrace> warps;
    std::int64_t n_warps = (n_threads + warp_size - 1) / warp_size;
    warps.reserve(static_cast<size_t>(n_warps));

    for (std::int64_t w = 0; w < n_warps; ++w) {
        WarpTrace warp;
        warp.warp_id = static_cast<int>(w);
        std::int64_t first = w * warp_size;
        std::int64_t last = std::min(n_threads, first + warp_size);
        for (std::int64_t t = first; t < last; ++t)
            warp.thread_ids.push_back(t);

        warp.instrs.reserve(templ.size());
        for (const auto& ti : templ) {
            WarpInstr wi;
            if (ti.kind == FlatInstr::Kind::Compute) {
                wi.kind = WarpInstr::Kind::Compute;
                wi.op_class = ti.op_class;
                wi.count = ti.count;
            } else {
                wi.kind = WarpInstr::Kind::Mem;
                wi.is_load = ti.kind == FlatInstr::Kind::Load;
                wi.addrs.reserve(warp.thread_ids.size());
                for (std::int64_t t : warp.thread_ids)
                    wi.addrs.push_back(eval_addr(ti, t));
            }
            warp.instrs.push_back(std::move(wi));
        }
        warps.push_back(std::move(warp));
    }
    return warps;
}

std::vector<std::uint64_t> coalesce_lines(std::span<const std::uint64_t> addrs,
                                          std::uint64_t line_bytes) {
    if (line_bytes == 0 || (line_bytes & (line_bytes - 1)) != 0)
        throw ValidationError("line_bytes", "must be a power of two");
    std::vector<std::uint64_t> lines;
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t a : addrs) {
        std::uint64_t line = a / line_bytes;
        if (seen.insert(line).second)
            lines.push_back(line);
    }
    return lines;
}

std::size_t coalesce(std::span<const std::uint64_t> addrs, std::uint64_t line_bytes) {
    return coalesce_lines(addrs, line_bytes).size();
}

CacheStats simulate_cache(std::span<const std::uint64_t> line_ids, int sets, int ways) {
    if (sets < 1)
        throw ValidationError("sets", "must be >= 1");
    if (ways < 1)
        throw ValidationError("ways", "must be >= 1");

    // Per set, most-recently-used line at the front.
    std::vector<std::list<std::uint64_t>> lru(static_cast<size_t>(sets));
    CacheStats stats;
    for (std::uint64_t line : line_ids) {
        auto& set = lru[static_cast<size_t>(line % static_cast<std::uint64_t>(sets))];
        auto it = std::find(set.begin(), set.end(), line);
        if (it != set.end()) {
            ++stats.hits;
            set.erase(it);
            set.push_front(line);
        } else {
            ++stats.misses;
            set.push_front(line);
            if (set.size() > static_cast<size_t>(ways))
                set.pop_back();
        }
    }
    return stats;
}

double compute_cycles(const WarpTrace& warp, const std::map<std::string, double>& op_latency) {
    double cycles = 0.0;
    for (const auto& instr : warp.instrs) {
        if (instr.kind != WarpInstr::Kind::Compute)
            continue;
        auto it = op_latency.find(instr.op_class);
        if (it == op_latency.end())
            throw ValidationError("op_latency",
                                  "unknown op class '" + instr.op_class + "'");
        cycles += it->second * static_cast<double>(instr.count);
    }
    return cycles;
}

GpuPrediction predict(const TraceProgram& prog, const GpuParams& params,
                      std::int64_t n_threads, double freq_hz) {
    if (freq_hz <= 0)
        throw ValidationError("freq_hz", "must be > 0");

    std::vector<WarpTrace> warps = form_warps(prog, n_threads, params.warp_size);
    GpuPrediction pred;
    pred.warps.reserve(warps.size());

    for (const auto& warp : warps) {
        WarpBreakdown wb;
        wb.warp_id = warp.warp_id;
        wb.size = static_cast<int>(warp.thread_ids.size());
        wb.compute_cycles = compute_cycles(warp, params.op_latency);

        std::vector<std::uint64_t> stream;
        for (const auto& instr : warp.instrs) {
            if (instr.kind != WarpInstr::Kind::Mem)
                continue;
            std::vector<std::uint64_t> lines =
                coalesce_lines(instr.addrs, static_cast<std::uint64_t>(params.cache_line_bytes));
            stream.insert(stream.end(), lines.begin(), lines.end());
        }
        wb.transactions = static_cast<std::int64_t>(stream.size());
        if (params.cache_enabled) {
            CacheStats cs = simulate_cache(stream, params.cache_sets, params.cache_ways);
            wb.hits = cs.hits;
            wb.misses = cs.misses;
        } else {
            wb.hits = 0;
            wb.misses = wb.transactions;
        }
        wb.mem_stall_cycles = static_cast<double>(wb.misses) * params.mem_latency_cycles +
                              static_cast<double>(wb.hits) * params.hit_latency_cycles;

        pred.compute_cycles_total += wb.compute_cycles;
        pred.mem_transactions_total += wb.transactions;
        pred.mem_cycles_total += wb.mem_stall_cycles;
        pred.warps.push_back(wb);
    }

    int w_count = static_cast<int>(warps.size());
    double lat_limit =
        std::max(1.0, std::floor(params.mem_latency_cycles / params.departure_delay_cycles));
    pred.mwp = static_cast<int>(std::min({static_cast<double>(w_count),
                                          static_cast<double>(params.max_concurrent_warps),
                                          lat_limit}));

    pred.total_cycles = std::max(pred.compute_cycles_total,
                                 pred.mem_cycles_total / static_cast<double>(pred.mwp)) +
                        params.mem_latency_cycles;
    pred.seconds_at_freq = pred.total_cycles / freq_hz;
    return pred;
}

}  // namespace hetplan::gpu
