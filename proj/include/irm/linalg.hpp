#pragma once

#include "irm/sparse_spd.hpp"
#include "irm/types.hpp"

#include <cmath>

namespace irm {

template <class Scalar>
Scalar dot(const VecT<Scalar>& u, const VecT<Scalar>& v) {
  require_arg(u.size() == v.size(), "dot: dimension mismatch");
  return u.dot(v);
}

template <class Scalar>
VecT<Scalar> axpy(const Scalar& s, const VecT<Scalar>& u, const VecT<Scalar>& v) {
  require_arg(u.size() == v.size(), "axpy: dimension mismatch");
  return v + s * u;
}

template <class Scalar>
Scalar squared_norm(const VecT<Scalar>& v) {
  return dot(v, v);
}

inline double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

// The quadratic form f(x) = 1/2 x'Ax - x'b whose unique minimiser solves
// Ax = b. The evaluation order below is the contract: tests compare other
// paths against exactly 1/2*dot(x, spmv(A,x)) - dot(x,b).
template <class Operator>
double energy(const Operator& A, const Vec& b, const Vec& x) {
  require_arg(b.size() == x.size(), "energy: dimension mismatch");
  return 0.5 * dot(x, spmv(A, x)) - dot(x, b);
}

}  // namespace irm
