#pragma once

#include "irm/engine.hpp"
#include "irm/sparse_spd.hpp"
#include "irm/trace.hpp"
#include "irm/types.hpp"

#include <vector>

namespace irm {

struct SolveResult {
  Vec x;
  SolveStatus status = SolveStatus::error;
  ConvergenceTrace trace;
};

enum class IrmCgVariant { basic, fast };

// Classic conjugate gradient with the shared steepest-descent-scaled start.
// restart_period > 0 resets the search direction to the residual every
// restart_period-th step; 0 disables restarting.
SolveResult cg_solve(const SparseSpdMatrix& A, const Vec& b, const Vec& x0, const SolveConfig& config,
                     int restart_period = 0);

// CG in which every refresh_every-th step is replaced by one basic IRM-CG
// step on the same state (refresh rather than restart: no information is
// thrown away).
SolveResult cg_with_refresh(const SparseSpdMatrix& A, const Vec& b, const Vec& x0, const SolveConfig& config,
                            int refresh_every);

// IRM-CG driver. The basic variant recomputes everything explicitly (three
// matrix-vector products per step); the fast variant uses the recursions and
// the config's refresh period (one product per step plus two per refresh).
SolveResult irm_cg_solve(const SparseSpdMatrix& A, const Vec& b, const Vec& x0, const SolveConfig& config,
                         IrmCgVariant variant);

// General engine driver over a generator-spec subspace recipe. If the energy
// fails to decrease three steps in a row, the next step falls back to a pure
// steepest-descent basis {r}, which always makes progress.
SolveResult irm_solve(const SparseSpdMatrix& A, const Vec& b, const Vec& x0,
                      const std::vector<GeneratorSpec>& specs, const SolveConfig& config);

}  // namespace irm
