#pragma once

#include "irm/types.hpp"

namespace irm {

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

// Symmetric positive definite matrix in compressed sparse row form. Both
// triangles are stored explicitly and kept numerically identical, column
// indices are strictly increasing within each row, and every diagonal entry
// is present and positive (a necessary SPD condition; definiteness itself is
// only probed statistically by the tests).
class SparseSpdMatrix {
 public:
  SparseSpdMatrix() = default;

  // Builds from an arbitrary triplet list: duplicates are summed, the result
  // must be numerically symmetric to within 1e-12 relative (then the two
  // triangles are averaged so symmetry is exact), and the full diagonal must
  // be present and positive.
  static SparseSpdMatrix from_triplets(Index n, std::vector<Triplet> entries);

  Index rows() const { return n_; }
  Index cols() const { return n_; }
  Index nonzeros() const { return static_cast<Index>(values_.size()); }

  const std::vector<Index>& row_offsets() const { return row_offsets_; }
  const std::vector<Index>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  Vec diagonal() const;

  // Row-wise product with ascending-column accumulation; the fixed order
  // makes repeated runs byte-identical.
  Vec multiply(const Vec& v) const;

  Mat to_dense() const;

 private:
  Index n_ = 0;
  std::vector<Index> row_offsets_ = {0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

inline Vec spmv(const SparseSpdMatrix& A, const Vec& v) { return A.multiply(v); }

template <class Scalar>
VecT<Scalar> spmv(const MatT<Scalar>& A, const VecT<Scalar>& v) {
  require_arg(A.cols() == v.size(), "spmv: dimension mismatch");
  return A * v;
}

}  // namespace irm
