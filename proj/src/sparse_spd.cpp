#include "irm/sparse_spd.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace irm {

SparseSpdMatrix SparseSpdMatrix::from_triplets(Index n, std::vector<Triplet> entries) {
  require_arg(n >= 1, "matrix dimension must be >= 1");

  std::map<std::pair<Index, Index>, double> merged;
  double max_abs = 0.0;
  for (const Triplet& t : entries) {
    require_arg(t.row >= 0 && t.row < n && t.col >= 0 && t.col < n, "triplet index out of range");
    merged[{t.row, t.col}] += t.value;
  }
  for (const auto& [ij, v] : merged) max_abs = std::max(max_abs, std::abs(v));

  // Symmetry: every stored (i,j) needs a (j,i) partner of the same value.
  for (auto& [ij, v] : merged) {
    const auto [i, j] = ij;
    if (i >= j) continue;
    auto mirror = merged.find({j, i});
    if (mirror == merged.end())
      throw NotSymmetricError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") has no mirror");
    if (std::abs(v - mirror->second) > 1e-12 * max_abs)
      throw NotSymmetricError("entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
    const double average = 0.5 * (v + mirror->second);
    v = average;
    mirror->second = average;
  }

  for (Index i = 0; i < n; ++i) {
    auto d = merged.find({i, i});
    if (d == merged.end() || !(d->second > 0.0))
      throw NotPositiveDefiniteError("diagonal entry " + std::to_string(i) + " missing or nonpositive");
  }

  SparseSpdMatrix A;
  A.n_ = n;
  A.row_offsets_.assign(static_cast<size_t>(n) + 1, 0);
  A.col_indices_.reserve(merged.size());
  A.values_.reserve(merged.size());
  // std::map iterates in (row, col) order, which is exactly CSR order.
  for (const auto& [ij, v] : merged) {
    A.col_indices_.push_back(ij.second);
    A.values_.push_back(v);
    ++A.row_offsets_[static_cast<size_t>(ij.first) + 1];
  }
  for (Index i = 0; i < n; ++i)
    A.row_offsets_[static_cast<size_t>(i) + 1] += A.row_offsets_[static_cast<size_t>(i)];
  return A;
}

Vec SparseSpdMatrix::diagonal() const {
  Vec d = Vec::Zero(n_);
  for (Index i = 0; i < n_; ++i)
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      if (col_indices_[static_cast<size_t>(k)] == i) d[i] = values_[static_cast<size_t>(k)];
  return d;
}

Vec SparseSpdMatrix::multiply(const Vec& v) const {
  require_arg(v.size() == n_, "spmv: dimension mismatch");
  Vec out(n_);
  for (Index i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      sum += values_[static_cast<size_t>(k)] * v[col_indices_[static_cast<size_t>(k)]];
    out[i] = sum;
  }
  return out;
}

Mat SparseSpdMatrix::to_dense() const {
  Mat D = Mat::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i)
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      D(i, col_indices_[static_cast<size_t>(k)]) = values_[static_cast<size_t>(k)];
  return D;
}

}  // namespace irm
