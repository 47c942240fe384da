#include "irm/solvers.hpp"

#include "irm/cg.hpp"
#include "irm/irm_cg.hpp"
#include "irm/linalg.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

namespace irm {

namespace {

using Clock = std::chrono::steady_clock;

// Shared solve loop: steepest-descent initialisation, cheap convergence test
// on the (possibly recursive) residual, certification of every convergence
// claim against an explicitly recomputed residual, tracing, and error-to-
// status mapping. The step callback performs exactly one iterate update.
SolveResult run_loop(const SparseSpdMatrix& A, const Vec& b, const Vec& x0, const SolveConfig& config,
                     std::string method, const std::function<void(SolverState&)>& step) {
  validate(config);
  require_arg(A.rows() == b.size(), "matrix and right-hand side dimensions must agree");
  const auto t0 = Clock::now();

  SolveResult result;
  result.x = x0;
  result.trace.method = std::move(method);

  const bool full = config.trace_level == TraceLevel::full;
  SolverState state;

  const auto add_row = [&](SolverState& s) {
    TraceRecord rec;
    rec.iter = s.iter;
    const double r_sq = squared_norm(s.r);
    rec.abs_res = std::sqrt(r_sq);
    rec.rel_res = s.r0_norm_sq > 0.0 ? std::sqrt(r_sq / s.r0_norm_sq) : 0.0;
    if (full) {
      rec.energy = energy(A, b, s.x);
      s.spmv_diagnostic += 1;
    }
    rec.basis_size = s.last_basis_size;
    rec.spmv = s.spmv_count;
    rec.wall_nanos = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
    result.trace.records.push_back(rec);
  };

  SolveStatus status = SolveStatus::max_iterations;
  try {
    state = init_steepest_descent(A, b, x0);
    add_row(state);

    if (state.converged_at_init) {
      status = SolveStatus::converged;
    } else {
      const double eps_sq = config.eps * config.eps * state.r0_norm_sq;
      // Accept convergence only after the cheap residual survives an explicit
      // recomputation; on a failed certification the true residual replaces
      // the drifted one and iteration continues.
      const auto certified_converged = [&](SolverState& s) {
        if (squared_norm(s.r) > eps_sq) return false;
        s.r = b - spmv(A, s.x);
        s.spmv_diagnostic += 1;
        s.rho = squared_norm(s.r);
        return s.rho <= eps_sq;
      };
      while (true) {
        if (certified_converged(state)) {
          status = SolveStatus::converged;
          break;
        }
        if (state.iter >= config.n_max) {
          status = SolveStatus::max_iterations;
          // Report the honest final residual, not the recursive one.
          state.r = b - spmv(A, state.x);
          state.spmv_diagnostic += 1;
          break;
        }
        step(state);
        add_row(state);
      }
    }
    result.x = state.x;
  } catch (const NotPositiveDefiniteError& e) {
    status = SolveStatus::error;
    result.trace.error_text = e.what();
  } catch (const DegenerateBasisError& e) {
    status = SolveStatus::error;
    result.trace.error_text = e.what();
  }

  if (status == SolveStatus::error && state.x.size() > 0) result.x = state.x;
  result.status = status;
  result.trace.status = status;
  if (state.r.size() > 0 && state.r0_norm_sq > 0.0)
    result.trace.final_rel_res = std::sqrt(squared_norm(state.r) / state.r0_norm_sq);
  else
    result.trace.final_rel_res = 0.0;
  result.trace.spmv = state.spmv_count;
  result.trace.spmv_total = state.spmv_count + state.spmv_diagnostic;
  return result;
}

}  // namespace

SolveResult cg_solve(const SparseSpdMatrix& A, const Vec& b, const Vec& x0, const SolveConfig& config,
                     int restart_period) {
  require_arg(restart_period >= 0, "restart_period must be >= 0 (0 disables restarts)");
  return run_loop(A, b, x0, config, "cg", [&A, restart_period](SolverState& state) {
    const bool restart = restart_period > 0 && (state.iter + 1) % restart_period == 0;
    cg_step(A, state, restart);
  });
}

SolveResult cg_with_refresh(const SparseSpdMatrix& A, const Vec& b, const Vec& x0, const SolveConfig& config,
                            int refresh_every) {
  require_arg(refresh_every >= 1, "refresh_every must be >= 1");
  const std::string method = "cg+refresh:" + std::to_string(refresh_every);
  return run_loop(A, b, x0, config, method, [&A, &b, &config, refresh_every](SolverState& state) {
    if ((state.iter + 1) % refresh_every == 0)
      irm_cg_step_basic(A, b, state, config);
    else
      cg_step(A, state);
  });
}

SolveResult irm_cg_solve(const SparseSpdMatrix& A, const Vec& b, const Vec& x0, const SolveConfig& config,
                         IrmCgVariant variant) {
  const std::string method = variant == IrmCgVariant::basic ? "irm-cg-basic" : "irm-cg-fast";
  return run_loop(A, b, x0, config, method, [&A, &b, &config, variant](SolverState& state) {
    if (variant == IrmCgVariant::basic)
      irm_cg_step_basic(A, b, state, config);
    else
      irm_cg_step_fast(A, b, state, config);
  });
}

SolveResult irm_solve(const SparseSpdMatrix& A, const Vec& b, const Vec& x0, const std::vector<GeneratorSpec>& specs,
                      const SolveConfig& config) {
  require_arg(!specs.empty(), "generator list must be non-empty");
  const std::string method = "irm:" + to_string(specs);
  const std::vector<GeneratorSpec> sd_specs = {GeneratorSpec{GeneratorKind::current_residual, 1.0}};
  // Energy from the explicit residual the engine maintains: with r = b - Ax,
  // f(x) = 1/2 xᵀAx - xᵀb = -1/2 xᵀ(b + r), no matrix-vector product needed.
  const auto free_energy = [&b](const SolverState& state) {
    const Vec br = b + state.r;
    return -0.5 * dot(state.x, br);
  };
  double f_prev = 0.0;
  int stalled = 0;
  bool started = false;
  return run_loop(A, b, x0, config, method, [&](SolverState& state) {
    if (!started) {
      f_prev = free_energy(state);
      started = true;
    }
    if (stalled >= 3) {
      irm_step(A, b, state, sd_specs, config);
      stalled = 0;
    } else {
      irm_step(A, b, state, specs, config);
    }
    const double f_now = free_energy(state);
    if (f_now < f_prev)
      stalled = 0;
    else
      stalled += 1;
    f_prev = f_now;
  });
}

}  // namespace irm
