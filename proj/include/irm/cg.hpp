#pragma once

#include "irm/engine.hpp"
#include "irm/linalg.hpp"
#include "irm/types.hpp"

namespace irm {

// One classic conjugate-gradient step in pending-increment form, sharing
// SolverState with the other methods: apply the pending increment, advance
// the residual by the exact recursion r ← r − A·p, mix the new search
// direction d ← r + (ρ_new/ρ_old)·d (Fletcher–Reeves weight; d ← r when
// restarting), and stage the next pending increment p = α·d with its A·p
// cache. One matrix-vector product per step.
template <class Matrix, class Scalar>
void cg_step(const Matrix& A, SolverStateT<Scalar>& state, bool restart = false) {
  state.x = state.x + state.p;
  state.r = state.r - state.beta;
  const Scalar rho_next = squared_norm(state.r);
  if (rho_next == Scalar(0)) {
    // The applied increment solved the system exactly; there is no next
    // direction. Stage a zero increment so further steps are no-ops.
    state.d = state.r;
    state.p = state.r;
    state.beta = state.r;
    state.rho = rho_next;
    state.last_basis_size = 0;
    ++state.iter;
    return;
  }
  if (restart) {
    state.d = state.r;
  } else {
    const Scalar mix = rho_next / state.rho;
    state.d = state.r + mix * state.d;
  }
  const VecT<Scalar> ad = spmv(A, state.d);
  state.spmv_count += 1;
  const Scalar d_a_d = dot(state.d, ad);
  if (!(d_a_d > Scalar(0))) throw NotPositiveDefiniteError();
  const Scalar step = rho_next / d_a_d;
  state.p = step * state.d;
  state.beta = step * ad;
  state.rho = rho_next;
  state.last_basis_size = 0;
  ++state.iter;
}

}  // namespace irm
