#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hetplan/errors.hpp"

namespace hetplan::gpu {

// Affine byte-address expression over the thread index and enclosing loop
// variables: base + tid_coeff * tid + sum(coeff[v] * v).
struct AddrExpr {
    std::int64_t base_bytes = 0;
    std::int64_t tid_coeff_bytes = 0;
    std::map<std::string, std::int64_t> loop_coeffs;
    bool operator==(const AddrExpr&) const = default;
};

struct TraceStmt {
    enum class Kind { Compute, Load, Store, Loop };
    Kind kind = Kind::Compute;

    // Compute
    std::string op_class;
    std::int64_t count = 0;

    // Load / Store
    AddrExpr addr;

    // Loop: half-open iteration range [lower, upper)
    std::string loop_var;
    std::int64_t lower = 0;
    std::int64_t upper = 0;
    std::vector<TraceStmt> body;
};

struct TraceProgram {
    std::vector<TraceStmt> stmts;
};

// Parses the trace DSL. One statement per line, '#' starts a comment:
//
//   ARRAY <name> <base_bytes>          symbol binding (not a statement)
//   COMPUTE <op_class> <count>
//   LOAD <addr>      where <addr> is  <expr>  or  <name>[<expr>]
//   STORE <addr>     and <expr> is a '+'-joined list of  k | k*tid | k*<var>
//   LOOP <var> <lower> <upper>         body follows, closed by END
//   END
//
// Loop bounds are integer constants with lower <= upper; loop variables must
// be unique along any nesting path; address expressions may reference only
// enclosing loop variables. Errors carry line/column positions.
TraceProgram parse_trace(const std::string& text);

// Total number of statements, counting loop bodies recursively.
std::size_t statement_count(const TraceProgram& prog);

struct FlatInstr {
    enum class Kind { Compute, Load, Store };
    Kind kind = Kind::Compute;
    std::string op_class;  // Compute
    std::int64_t count = 0;
    std::uint64_t addr_bytes = 0;  // Load / Store
};

// Fully unrolls all loops for one thread; every memory instruction carries a
// concrete byte address (which must evaluate non-negative).
std::vector<FlatInstr> flatten(const TraceProgram& prog, std::int64_t tid);

}  // namespace hetplan::gpu
