#pragma once

#include "irm/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace irm {

// One per-step record of a solve. Record 0 describes the state right after
// initialisation (rel_res = 1 by definition); spmv is the cumulative count of
// algorithm-required matrix-vector products.
struct TraceRecord {
  Index iter = 0;
  double abs_res = 0.0;
  double rel_res = 0.0;
  std::optional<double> energy;  // recorded only at "full" trace level
  int basis_size = 0;            // kept subspace dimension (0 for CG steps)
  long long spmv = 0;
  long long wall_nanos = 0;
};

struct ConvergenceTrace {
  std::string method;
  SolveStatus status = SolveStatus::error;
  std::string error_text;        // set when status == error
  double final_rel_res = 0.0;    // certified against an explicitly recomputed residual
  long long spmv = 0;            // algorithm-required products
  long long spmv_total = 0;      // including certification/instrumentation products
  std::vector<TraceRecord> records;
};

// CSV schema (versioned so regression files survive additions):
//   # schema=1
//   # method=...
//   # status=...
//   [# error=...]
//   # final_rel_res=...
//   # spmv=...
//   # spmv_total=...
//   iter,abs_res,rel_res,energy,basis_size,spmv,wall_nanos
// Doubles are printed with 17 significant digits; a missing energy is an
// empty cell.
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);
ConvergenceTrace read_trace_csv(std::istream& in);

// JSON mirror of the same fields (energy is null when absent).
void write_trace_json(std::ostream& out, const ConvergenceTrace& trace);
ConvergenceTrace read_trace_json(std::istream& in);

}  // namespace irm
