#pragma once

#include "irm/engine.hpp"
#include "irm/linalg.hpp"
#include "irm/reduced.hpp"
#include "irm/types.hpp"

namespace irm {

namespace detail {

// Shared tail of the basic/fast steps: minimise the energy over the plane
// spanned by the fresh residual and the just-applied increment, using the
// cached products alpha = A·r and beta = A·p. Replaces the pending increment,
// advances both caches by the exact recursions p' = [r p]a, Ap' = [α β]a, and
// keeps the CG-compatible direction/ρ fields consistent so CG steps may
// follow.
template <class Scalar>
void plane_minimise(SolverStateT<Scalar>& state, const Scalar& pivot_tol) {
  SubspaceBasisT<Scalar> basis;
  basis.vectors = {state.r, state.p};
  // The honest projection Φᵀr is kept for the reduced right-hand side even at
  // unit relaxation, where its second entry rᵀp vanishes in exact arithmetic:
  // on severely ill-conditioned systems an explicitly recomputed residual
  // retains a genuine component along p, and discarding it turns the step
  // into an ascent.
  ReducedSystemT<Scalar> rs = assemble_from_products(basis, {state.alpha, state.beta}, state.r);
  ReducedSolutionT<Scalar> sol = solve_reduced(rs, pivot_tol);
  const VecT<Scalar> p_next = sol.a(0) * state.r + sol.a(1) * state.p;
  const VecT<Scalar> beta_next = sol.a(0) * state.alpha + sol.a(1) * state.beta;
  // In exact arithmetic p' = a₀·(r + (a₁/a₀)·p_old) is a scaled CG direction;
  // exposing the unscaled direction keeps CG steps chainable after this one.
  if (sol.a(0) == Scalar(0)) state.d = p_next;
  else state.d = p_next / sol.a(0);
  state.p = p_next;
  state.beta = beta_next;
  state.rho = rs.rbar(0);
  state.last_a = sol.a;
  state.last_basis_size = static_cast<int>(sol.kept.size());
  ++state.iter;
}

}  // namespace detail

// Residual maintenance for the fast path, called immediately after the x
// update of step (state.iter + 1): ordinarily the residual advances by the
// exact recursion r ← r − ω·(A·p); every refresh_period-th step it is instead
// recomputed explicitly from b − A·x and the A·p cache is refreshed too,
// purging accumulated round-off drift at the cost of two extra matrix-vector
// products. The iterate itself is never touched.
template <class Matrix, class Scalar>
void maybe_refresh(const Matrix& A, const VecT<Scalar>& b, SolverStateT<Scalar>& state, const Scalar& omega,
                   Index refresh_period) {
  const Index step = state.iter + 1;
  if (refresh_period >= 1 && step % refresh_period == 0) {
    state.r = b - spmv(A, state.x);
    state.beta = spmv(A, state.p);
    state.spmv_count += 2;
  } else {
    state.r = state.r - omega * state.beta;
  }
}

// One basic IRM-CG step: everything explicit, three matrix-vector products
// (residual, A·r, A·p).
template <class Matrix, class Scalar>
void irm_cg_step_basic(const Matrix& A, const VecT<Scalar>& b, SolverStateT<Scalar>& state, const Scalar& omega,
                       const Scalar& pivot_tol) {
  state.x = state.x + omega * state.p;
  state.r = b - spmv(A, state.x);
  state.alpha = spmv(A, state.r);
  state.beta = spmv(A, state.p);
  state.spmv_count += 3;
  detail::plane_minimise(state, pivot_tol);
}

// One fast IRM-CG step: the residual and A·p advance by recursions, so the
// only matrix-vector product is A·r — except on refresh steps, which spend
// two more to recompute r and A·p explicitly.
template <class Matrix, class Scalar>
void irm_cg_step_fast(const Matrix& A, const VecT<Scalar>& b, SolverStateT<Scalar>& state, const Scalar& omega,
                      const Scalar& pivot_tol, Index refresh_period) {
  state.x = state.x + omega * state.p;
  maybe_refresh(A, b, state, omega, refresh_period);
  state.alpha = spmv(A, state.r);
  state.spmv_count += 1;
  detail::plane_minimise(state, pivot_tol);
}

inline void irm_cg_step_basic(const SparseSpdMatrix& A, const Vec& b, SolverState& state, const SolveConfig& config) {
  irm_cg_step_basic(A, b, state, omega_at(config, state.iter), config.pivot_tol);
}

inline void irm_cg_step_fast(const SparseSpdMatrix& A, const Vec& b, SolverState& state, const SolveConfig& config) {
  irm_cg_step_fast(A, b, state, omega_at(config, state.iter), config.pivot_tol, config.i_max);
}

inline void maybe_refresh(const SparseSpdMatrix& A, const Vec& b, SolverState& state, const SolveConfig& config) {
  maybe_refresh(A, b, state, omega_at(config, state.iter), config.i_max);
}

}  // namespace irm
