#pragma once

#include "irm/linalg.hpp"
#include "irm/reduced.hpp"
#include "irm/sparse_spd.hpp"
#include "irm/types.hpp"

#include <string>
#include <vector>

namespace irm {

// Full iteration state shared by the IRM engine, IRM-CG, and the CG baseline,
// so that steps of the different methods can be freely interleaved on one
// state object.
template <class Scalar>
struct SolverStateT {
  VecT<Scalar> x;       // current iterate
  VecT<Scalar> r;       // current residual (recursive between refreshes on the fast path)
  VecT<Scalar> p;       // pending increment: the vector the NEXT step adds to x
  VecT<Scalar> alpha;   // cache of A·r for the most recent residual
  VecT<Scalar> beta;    // cache of A·p for the pending increment
  VecT<Scalar> d;       // unscaled search direction (CG baseline)
  VecT<Scalar> last_a;  // coefficients of the most recent reduced solve
  Scalar rho{};         // rᵀr of the current residual
  Scalar r0_norm_sq{};  // squared norm of the initial residual
  Index iter = 0;       // number of iterate updates applied so far
  int last_basis_size = 0;        // subspace dimension kept at the latest step
  long long spmv_count = 0;       // matrix-vector products the algorithm requires
  long long spmv_diagnostic = 0;  // extra products for certification/instrumentation
  bool converged_at_init = false;
};

using SolverState = SolverStateT<double>;

// Steepest-descent initialisation shared by every method: one step of exact
// line search along r0 becomes the first pending increment p0 = q·r0 with
// q = r0ᵀr0/(r0ᵀA r0). Both the A·r and A·p caches are valid on return, at a
// cost of exactly two matrix-vector products (one if r0 = 0).
template <class Matrix, class Scalar, class Derived>
SolverStateT<Scalar> init_steepest_descent(const Matrix& A, const VecT<Scalar>& b,
                                           const Eigen::MatrixBase<Derived>& x0) {
  require_arg(b.size() == x0.size(), "b and x0 must have the same length");
  SolverStateT<Scalar> state;
  state.x = x0;
  state.r = b - spmv(A, state.x);
  state.spmv_count = 1;
  state.r0_norm_sq = squared_norm(state.r);
  state.rho = state.r0_norm_sq;
  state.d = state.r;
  state.last_basis_size = 1;
  if (state.r0_norm_sq == Scalar(0)) {
    state.converged_at_init = true;
    state.p = VecT<Scalar>::Zero(b.size());
    state.alpha = state.p;
    state.beta = state.p;
    return state;
  }
  const VecT<Scalar> ar = spmv(A, state.r);
  state.spmv_count = 2;
  const Scalar r_a_r = dot(state.r, ar);
  if (!(r_a_r > Scalar(0))) throw NotPositiveDefiniteError();
  const Scalar q = state.r0_norm_sq / r_a_r;
  state.p = q * state.r;
  state.alpha = ar;
  state.beta = q * ar;
  return state;
}

// Recipes for the coordinate vectors of one step's trial subspace.
enum class GeneratorKind {
  current_residual,    // r
  previous_increment,  // p (the increment applied this step)
  jacobi,              // diag(A)⁻¹ r
  sor_forward,         // (D/w + L)⁻¹ r, one forward sweep
  sor_backward,        // (D/w + U)⁻¹ r, one backward sweep
  scaled_residual      // s·r
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::current_residual;
  double param = 1.0;  // SOR sweep factor w, or the scale s of scaled_residual
};

// Parses a comma-separated generator list such as "r,p", "jacobi",
// "sor-forward:1.5,p" or "scaled-residual:0.5". Accepts the short aliases
// r and p for the residual/increment kinds.
std::vector<GeneratorSpec> parse_generator_specs(const std::string& text);
std::string to_string(const std::vector<GeneratorSpec>& specs);

// Builds the trial subspace for the state's current residual, in spec order;
// vectors that come out exactly zero are omitted.
SubspaceBasis generate_subspace(const SolverState& state, const std::vector<GeneratorSpec>& specs,
                                const SparseSpdMatrix& A);

// One step of the general engine: apply the pending increment (scaled by the
// step's relaxation factor), recompute the residual explicitly, minimise the
// energy over a freshly generated subspace, and store the minimiser as the
// next pending increment. Costs 1 + m matrix-vector products for an m-vector
// basis.
void irm_step(const SparseSpdMatrix& A, const Vec& b, SolverState& state,
              const std::vector<GeneratorSpec>& specs, const SolveConfig& config);

}  // namespace irm
