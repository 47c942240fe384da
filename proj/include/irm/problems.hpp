#pragma once

#include "irm/sparse_spd.hpp"
#include "irm/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace irm {

// Diagonal matrix with the given (all positive) spectrum.
SparseSpdMatrix gen_diagonal(const std::vector<double>& spectrum);

// Geometrically spaced spectrum helper: count values from first to last.
std::vector<double> geometric_spectrum(double first, double last, int count);

// Standard 7-point Laplacian on a g×g×g grid with homogeneous Dirichlet
// boundary (diagonal 6, off-diagonals -1).
SparseSpdMatrix gen_laplacian3d(int g);

// Dense random SPD matrix with prescribed condition number: A = Q diag(s) Qᵀ
// with a seeded random orthogonal Q and a geometric spectrum 1..kappa.
SparseSpdMatrix gen_random_spd(Index n, double kappa, uint64_t seed);

// Unit cube discretised by ne×ne×ne trilinear 8-node hexahedral isotropic
// elasticity elements (2×2×2 Gauss quadrature), grounded springs on all three
// translational DOFs of the 8 corner nodes, and a single vertical point load
// at the top-face centre node. n = 3·(ne+1)³ unknowns.
struct FemCubeSpec {
  int elements_per_edge = 10;
  double spring_scale = 1.0;      // multiplies the reference spring stiffness E·h
  double youngs_modulus = 30e9;
  double poisson_ratio = 0.2;
  double load_magnitude = 1.0;
};

std::pair<SparseSpdMatrix, Vec> gen_fem_cube(const FemCubeSpec& spec);

// Single-element stiffness (24×24) for an h×h×h trilinear hexahedron;
// exposed so tests can check the six rigid-body zero eigenvalues.
Mat fem_hex_element_stiffness(double youngs_modulus, double poisson_ratio, double h);

// Matrix Market I/O: coordinate real symmetric/general for matrices, array
// real for right-hand sides. 1-based indices, `%%MatrixMarket` banner.
SparseSpdMatrix load_matrix_market(const std::string& path);
void save_matrix_market(const std::string& path, const SparseSpdMatrix& A);
Vec load_rhs_array(const std::string& path);
void save_rhs_array(const std::string& path, const Vec& b);

// Extreme-eigenvalue estimate via the symmetric Lanczos process (full
// reorthogonalisation up to n = 2000, plain three-term recurrence above).
// On breakdown (invariant subspace found early) the flag is set and the
// estimates computed so far are returned.
struct ConditionEstimate {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double kappa = 0.0;
  bool breakdown = false;
  int iterations = 0;  // Lanczos steps actually performed
};

ConditionEstimate estimate_condition(const SparseSpdMatrix& A, int iters, uint64_t seed = 42);

}  // namespace irm
