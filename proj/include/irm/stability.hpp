#pragma once

#include "irm/cg.hpp"
#include "irm/engine.hpp"
#include "irm/irm_cg.hpp"
#include "irm/rational.hpp"
#include "irm/types.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace irm {

// The 2×2 perturbation experiment: A = diag(1, κ), b = [1, 1], x0 = 0, with a
// disturbance δ injected after the initialisation phase.
struct DisturbedCase {
  double kappa = 1.0;
  double delta = 0.0;
};

enum class DisturbedMethod { cg, irm_cg };

namespace detail {
template <class Scalar>
MatT<Scalar> disturbed_matrix(const Scalar& kappa) {
  MatT<Scalar> A = MatT<Scalar>::Zero(2, 2);
  A(0, 0) = Scalar(1);
  A(1, 1) = kappa;
  return A;
}
}  // namespace detail

// Closed-form iterate of disturbed CG after its second step, as a function of
// δ and κ. Works over any exact or floating scalar.
template <class Scalar>
VecT<Scalar> perturbed_cg_closed_form(const Scalar& kappa, const Scalar& delta) {
  const Scalar km1 = kappa - Scalar(1);
  const Scalar kp1 = kappa + Scalar(1);
  const Scalar denom = Scalar(4) * kp1 - Scalar(4) * delta * km1 + delta * delta * km1 * km1;
  if (denom == Scalar(0)) throw SingularPerturbationError();
  VecT<Scalar> x(2);
  x(0) = Scalar(2) * (Scalar(1) / kp1 + Scalar(2) * km1 / denom);
  x(1) = Scalar(2) * (Scalar(1) / kp1 + km1 * (delta * km1 - Scalar(2)) / (kappa * denom));
  return x;
}

// Simulated disturbed CG: initialise, add δ to the second component of the
// stored search direction (the residual vector the first direction mix reads),
// then run exactly two production CG steps. The first step still applies the
// clean steepest-descent increment; the disturbance enters through the
// direction update, and the returned second iterate matches
// perturbed_cg_closed_form identically in exact arithmetic.
template <class Scalar>
VecT<Scalar> run_disturbed_cg(const Scalar& kappa, const Scalar& delta) {
  const MatT<Scalar> A = detail::disturbed_matrix(kappa);
  VecT<Scalar> b(2);
  b(0) = Scalar(1);
  b(1) = Scalar(1);
  SolverStateT<Scalar> state = init_steepest_descent(A, b, VecT<Scalar>::Zero(2).eval());
  state.d(1) += delta;
  cg_step(A, state);
  cg_step(A, state);
  return state.x;
}

// Simulated disturbed IRM-CG: initialise, run one clean production step so a
// fresh pending increment exists, add δ to that increment's second component,
// apply it to the iterate, and recover with a single two-equation plane
// minimisation over the residual and the disturbed increment.  The corrupted
// direction is just another basis vector to the minimiser, so the recovery
// absorbs the disturbance in one step and the returned iterate matches the
// exact solution [1, 1/κ] to round-off.
//
// The recovery assembles the full reduced right-hand side from the true
// residual (it cannot assume the residual is orthogonal to the previous
// increment — the disturbance destroys exactly that property).  A small
// relative pivot tolerance makes the rank decision robust when the disturbed
// basis is collinear (κ = 1 leaves the residual parallel to the increment);
// the dropped direction is then simply excluded and the remaining
// one-dimensional minimisation is still exact.
template <class Scalar>
VecT<Scalar> run_disturbed_irm_cg(const Scalar& kappa, const Scalar& delta) {
  const MatT<Scalar> A = detail::disturbed_matrix(kappa);
  VecT<Scalar> b(2);
  b(0) = Scalar(1);
  b(1) = Scalar(1);
  SolverStateT<Scalar> state = init_steepest_descent(A, b, VecT<Scalar>::Zero(2).eval());
  const Scalar one(1);
  const Scalar tol = Scalar(1) / Scalar(1000000000000LL);
  irm_cg_step_basic(A, b, state, one, tol);
  state.p(1) += delta;
  state.x = (state.x + state.p).eval();
  state.r = (b - spmv(A, state.x)).eval();

  SubspaceBasisT<Scalar> basis;
  basis.vectors.push_back(state.r);
  basis.vectors.push_back(state.p);
  std::vector<VecT<Scalar>> products;
  products.push_back(spmv(A, state.r));
  products.push_back(spmv(A, state.p));
  const ReducedSystemT<Scalar> rs = assemble_from_products(basis, products, state.r);
  const ReducedSolutionT<Scalar> sol = solve_reduced(rs, tol);
  return (state.x + sol.a(0) * state.r + sol.a(1) * state.p).eval();
}

// Double-precision front door used by the CLI and tests.
Vec run_disturbed(DisturbedMethod method, const DisturbedCase& c);
Vec perturbed_cg_closed_form(const DisturbedCase& c);

// Inclusive linear grid of disturbance values.
struct DeltaGrid {
  double lo = -1e-2;
  double hi = 1e-2;
  int count = 401;
};

std::vector<double> grid_points(const DeltaGrid& grid);

// One row of the disturbance sweep: closed-form error components of the
// second CG iterate against the exact solution [1, 1/κ].
struct SweepRow {
  double kappa = 0.0;
  double delta = 0.0;
  double err_x1 = 0.0;
  double err_x2 = 0.0;
};

std::vector<SweepRow> sweep_fig1(const std::vector<double>& kappas, const DeltaGrid& grid);

// CSV: header `kappa,delta,err_x1,err_x2`, 17 significant digits.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Runs basic IRM-CG entirely in exact rational arithmetic on diag(1, κ),
// b = [1,1], x0 = 0, stopping as soon as the residual is exactly zero (at
// most two steps; one when κ = 1). Returns the exact iterate (1, 1/κ).
VecT<ExactRational> rational_two_step_oracle(const ExactRational& kappa);

}  // namespace irm
