#pragma once

#include "irm/linalg.hpp"
#include "irm/sparse_spd.hpp"
#include "irm/types.hpp"

#include <cstddef>
#include <vector>

namespace irm {

// Ordered list of coordinate vectors spanning the trial subspace of one step.
template <class Scalar>
struct SubspaceBasisT {
  std::vector<VecT<Scalar>> vectors;

  Index size() const { return static_cast<Index>(vectors.size()); }
  Index rows() const { return vectors.empty() ? 0 : static_cast<Index>(vectors.front().size()); }
};

using SubspaceBasis = SubspaceBasisT<double>;

// Small dense system minimised at each step: abar = ΦᵀAΦ, rbar = Φᵀr.
// `kept` is filled by solve_reduced with the pivot indices (0-based) that
// survived dropping.
template <class Scalar>
struct ReducedSystemT {
  MatT<Scalar> abar;
  VecT<Scalar> rbar;
  std::vector<int> kept;
};

using ReducedSystem = ReducedSystemT<double>;

template <class Scalar>
struct ReducedSolutionT {
  VecT<Scalar> a;
  std::vector<int> kept;
};

using ReducedSolution = ReducedSolutionT<double>;

// Assembles the reduced system from cached operator products
// (products[k] must equal A·basis.vectors[k]); performs no matrix-vector
// products itself. The cross terms are symmetrized by averaging, which removes
// the assembly round-off asymmetry.
template <class Scalar>
ReducedSystemT<Scalar> assemble_from_products(const SubspaceBasisT<Scalar>& basis,
                                              const std::vector<VecT<Scalar>>& products,
                                              const VecT<Scalar>& r) {
  require_arg(!basis.vectors.empty(), "basis must contain at least one vector");
  require_arg(basis.vectors.size() == products.size(), "one product per basis vector required");
  const Index n = basis.rows();
  const Index m = basis.size();
  for (const auto& v : basis.vectors) require_arg(v.size() == n, "basis vectors must share one length");
  for (const auto& v : products) require_arg(v.size() == n, "products must match basis vector length");
  require_arg(r.size() == n, "residual length must match basis vectors");

  ReducedSystemT<Scalar> rs;
  rs.abar.resize(m, m);
  rs.rbar.resize(m);
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < m; ++k) rs.abar(j, k) = dot(basis.vectors[j], products[k]);
    rs.rbar(j) = dot(basis.vectors[j], r);
  }
  const MatT<Scalar> sym = (rs.abar + rs.abar.transpose()) * Scalar(1) / Scalar(2);
  rs.abar = sym;
  return rs;
}

// Assembles the reduced system directly from the operator: one matrix-vector
// product per basis vector.
template <class Matrix, class Scalar>
ReducedSystemT<Scalar> assemble(const Matrix& A, const SubspaceBasisT<Scalar>& basis, const VecT<Scalar>& r) {
  std::vector<VecT<Scalar>> products;
  products.reserve(basis.vectors.size());
  for (const auto& v : basis.vectors) products.push_back(spmv(A, v));
  return assemble_from_products(basis, products, r);
}

// Solves the reduced system by LDLᵀ factorization in the given vector order,
// dropping (almost) linearly dependent rows/columns instead of pivoting.
// Each pivot is judged against its own diagonal entry: d_k/abar(k,k) equals
// one minus the squared A-correlation of vector k with the span of the
// already-kept vectors, so the test is invariant under per-vector rescaling
// (basis vectors of wildly different magnitudes are routine — a shrinking
// increment next to a large residual must not look degenerate). A pivot
// within pivot_tol·|abar(k,k)| of zero drops its row/column; one more
// negative than that signals a non-SPD operator upstream.
template <class Scalar>
ReducedSolutionT<Scalar> solve_reduced(const ReducedSystemT<Scalar>& rs, const Scalar& pivot_tol) {
  const Index m = rs.abar.rows();
  require_arg(rs.abar.cols() == m && rs.rbar.size() == m, "reduced system dimensions must agree");

  MatT<Scalar> L = MatT<Scalar>::Zero(m, m);
  VecT<Scalar> d = VecT<Scalar>::Zero(m);
  std::vector<int> kept;

  for (Index k = 0; k < m; ++k) {
    Scalar dk = rs.abar(k, k);
    for (int j : kept) dk -= L(k, j) * L(k, j) * d(j);
    const Scalar akk =
        rs.abar(k, k) < Scalar(0) ? Scalar(-rs.abar(k, k)) : rs.abar(k, k);
    const Scalar threshold = pivot_tol * akk;
    if (dk < -threshold) throw NotPositiveDefiniteError();
    if (dk <= threshold) continue;  // drop row/column k
    d(k) = dk;
    kept.push_back(static_cast<int>(k));
    for (Index i = k + 1; i < m; ++i) {
      Scalar lik = rs.abar(i, k);
      for (int j : kept)
        if (j < static_cast<int>(k)) lik -= L(i, j) * L(k, j) * d(j);
      L(i, k) = lik / dk;
    }
  }

  ReducedSolutionT<Scalar> sol;
  sol.a = VecT<Scalar>::Zero(m);
  if (kept.empty()) {
    bool rbar_zero = true;
    for (Index k = 0; k < m; ++k)
      if (!(rs.rbar(k) == Scalar(0))) rbar_zero = false;
    if (!rbar_zero) throw DegenerateBasisError();
    return sol;  // nothing to do: basis orthogonal to a zero right-hand side
  }

  // Forward substitution, diagonal scaling, and back substitution restricted
  // to the kept indices (L is unit lower triangular on that index set).
  VecT<Scalar> y = VecT<Scalar>::Zero(m);
  for (size_t ii = 0; ii < kept.size(); ++ii) {
    const int k = kept[ii];
    Scalar v = rs.rbar(k);
    for (size_t jj = 0; jj < ii; ++jj) v -= L(k, kept[jj]) * y(kept[jj]);
    y(k) = v;
  }
  for (int k : kept) y(k) /= d(k);
  for (size_t ii = kept.size(); ii-- > 0;) {
    const int k = kept[ii];
    Scalar v = y(k);
    for (size_t jj = ii + 1; jj < kept.size(); ++jj) v -= L(kept[jj], k) * sol.a(kept[jj]);
    sol.a(k) = v;
  }
  sol.kept = std::move(kept);
  return sol;
}

}  // namespace irm
