#pragma once

#include <cstdint>
#include <span>

#include "hetplan/platform.hpp"
#include "hetplan/trace.hpp"

namespace hetplan::gpu {

// One instruction of a warp's lockstep stream. Memory instructions carry the
// evaluated byte address of every thread in the warp.
struct WarpInstr {
    enum class Kind { Compute, Mem };
    Kind kind = Kind::Compute;
    std::string op_class;
    std::int64_t count = 0;
    bool is_load = true;
    std::vector<std::uint64_t> addrs;  // one per thread, thread order
};

struct WarpTrace {
    int warp_id = 0;
    std::vector<std::int64_t> thread_ids;
    std::vector<WarpInstr> instrs;
};

// Groups n_threads 1-D thread ids into ceil(n/warp_size) warps; the last warp
// may be partial.
std::vector<WarpTrace> form_warps(const TraceProgram& prog, std::int64_t n_threads,
                                  int warp_size);

// Distinct cache lines touched by a warp's per-thread addresses, in first-use
// order. line_bytes must be a power of two.
std::vector<std::uint64_t> coalesce_lines(std::span<const std::uint64_t> addrs,
                                          std::uint64_t line_bytes);
std::size_t coalesce(std::span<const std::uint64_t> addrs, std::uint64_t line_bytes);

struct CacheStats {
    std::int64_t hits = 0;
    std::int64_t misses = 0;
};

// Set-associative LRU simulation over a line-id stream; set = line_id % sets.
CacheStats simulate_cache(std::span<const std::uint64_t> line_ids, int sets, int ways);

// Sum over compute instructions of op_latency[op_class] * count.
double compute_cycles(const WarpTrace& warp, const std::map<std::string, double>& op_latency);

struct WarpBreakdown {
    int warp_id = 0;
    int size = 0;
    double compute_cycles = 0.0;
    std::int64_t transactions = 0;
    std::int64_t hits = 0;
    std::int64_t misses = 0;
    double mem_stall_cycles = 0.0;
};

struct GpuPrediction {
    double total_cycles = 0.0;
    double compute_cycles_total = 0.0;
    std::int64_t mem_transactions_total = 0;
    double mem_cycles_total = 0.0;
    int mwp = 1;
    double seconds_at_freq = 0.0;
    std::vector<WarpBreakdown> warps;
};

// Warp-overlap analytical model:
//   m_w  = misses_w * mem_latency + hits_w * hit_latency   (per-warp stall;
//          with the cache disabled every transaction costs mem_latency)
//   MWP  = min(W, max_concurrent_warps, max(1, floor(mem_latency / departure_delay)))
//   total = max(sum c_w, sum m_w / MWP) + mem_latency
GpuPrediction predict(const TraceProgram& prog, const GpuParams& params,
                      std::int64_t n_threads, double freq_hz);

}  // namespace hetplan::gpu
