#include "irm/problems.hpp"

#include "irm/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace irm {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

SparseSpdMatrix gen_diagonal(const std::vector<double>& spectrum) {
  require_arg(!spectrum.empty(), "spectrum must be non-empty");
  std::vector<Triplet> entries;
  entries.reserve(spectrum.size());
  for (size_t i = 0; i < spectrum.size(); ++i) {
    require_arg(spectrum[i] > 0.0, "spectrum entries must be positive");
    entries.push_back({static_cast<Index>(i), static_cast<Index>(i), spectrum[i]});
  }
  return SparseSpdMatrix::from_triplets(static_cast<Index>(spectrum.size()), std::move(entries));
}

std::vector<double> geometric_spectrum(double first, double last, int count) {
  require_arg(first > 0.0 && last > 0.0, "geometric spectrum endpoints must be positive");
  require_arg(count >= 1, "count must be >= 1");
  std::vector<double> values;
  values.reserve(static_cast<size_t>(count));
  if (count == 1) {
    values.push_back(first);
    return values;
  }
  const double log_ratio = std::log(last / first) / (count - 1);
  for (int i = 0; i < count; ++i) values.push_back(first * std::exp(i * log_ratio));
  values.back() = last;
  return values;
}

SparseSpdMatrix gen_laplacian3d(int g) {
  require_arg(g >= 2, "grid size must be >= 2");
  const Index n = static_cast<Index>(g) * g * g;
  const auto idx = [g](int ix, int iy, int iz) {
    return static_cast<Index>(ix) + static_cast<Index>(g) * (iy + static_cast<Index>(g) * iz);
  };
  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(7 * n));
  for (int iz = 0; iz < g; ++iz)
    for (int iy = 0; iy < g; ++iy)
      for (int ix = 0; ix < g; ++ix) {
        const Index i = idx(ix, iy, iz);
        entries.push_back({i, i, 6.0});
        if (ix > 0) entries.push_back({i, idx(ix - 1, iy, iz), -1.0});
        if (ix + 1 < g) entries.push_back({i, idx(ix + 1, iy, iz), -1.0});
        if (iy > 0) entries.push_back({i, idx(ix, iy - 1, iz), -1.0});
        if (iy + 1 < g) entries.push_back({i, idx(ix, iy + 1, iz), -1.0});
        if (iz > 0) entries.push_back({i, idx(ix, iy, iz - 1), -1.0});
        if (iz + 1 < g) entries.push_back({i, idx(ix, iy, iz + 1), -1.0});
      }
  return SparseSpdMatrix::from_triplets(n, std::move(entries));
}

SparseSpdMatrix gen_random_spd(Index n, double kappa, uint64_t seed) {
  require_arg(n >= 1, "n must be >= 1");
  require_arg(kappa >= 1.0, "kappa must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat G(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) G(i, j) = gauss(rng);
  const Mat Q = Eigen::HouseholderQR<Mat>(G).householderQ();
  const std::vector<double> spectrum = geometric_spectrum(1.0, kappa, static_cast<int>(n));
  Vec d(n);
  for (Index i = 0; i < n; ++i) d(i) = spectrum[static_cast<size_t>(i)];
  Mat A = Q * d.asDiagonal() * Q.transpose();
  A = 0.5 * (A + A.transpose()).eval();
  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) entries.push_back({i, j, A(i, j)});
  return SparseSpdMatrix::from_triplets(n, std::move(entries));
}

Mat fem_hex_element_stiffness(double youngs_modulus, double poisson_ratio, double h) {
  require_arg(youngs_modulus > 0.0, "Young's modulus must be positive");
  require_arg(poisson_ratio >= 0.0 && poisson_ratio < 0.5, "Poisson ratio must lie in [0, 0.5)");
  require_arg(h > 0.0, "element size must be positive");

  // Node order: counter-clockwise bottom face, then top face.
  static const int corner[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                                   {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

  const double lam =
      youngs_modulus * poisson_ratio / ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  const double mu = youngs_modulus / (2.0 * (1.0 + poisson_ratio));
  Mat D = Mat::Zero(6, 6);  // Voigt order: xx, yy, zz, xy, yz, zx
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) D(i, j) = i == j ? lam + 2.0 * mu : lam;
  for (int i = 3; i < 6; ++i) D(i, i) = mu;

  const double gp = 1.0 / std::sqrt(3.0);
  const double jac = h / 2.0;  // constant Jacobian of the axis-aligned cube element
  const double det_j = jac * jac * jac;

  Mat K = Mat::Zero(24, 24);
  for (int qx = -1; qx <= 1; qx += 2)
    for (int qy = -1; qy <= 1; qy += 2)
      for (int qz = -1; qz <= 1; qz += 2) {
        const double xi = gp * qx, eta = gp * qy, zeta = gp * qz;
        Mat B = Mat::Zero(6, 24);
        for (int i = 0; i < 8; ++i) {
          const double dn_dx = 0.125 * corner[i][0] * (1.0 + eta * corner[i][1]) * (1.0 + zeta * corner[i][2]) / jac;
          const double dn_dy = 0.125 * corner[i][1] * (1.0 + xi * corner[i][0]) * (1.0 + zeta * corner[i][2]) / jac;
          const double dn_dz = 0.125 * corner[i][2] * (1.0 + xi * corner[i][0]) * (1.0 + eta * corner[i][1]) / jac;
          const int c = 3 * i;
          B(0, c) = dn_dx;
          B(1, c + 1) = dn_dy;
          B(2, c + 2) = dn_dz;
          B(3, c) = dn_dy;
          B(3, c + 1) = dn_dx;
          B(4, c + 1) = dn_dz;
          B(4, c + 2) = dn_dy;
          B(5, c) = dn_dz;
          B(5, c + 2) = dn_dx;
        }
        K += B.transpose() * D * B * det_j;
      }
  return K;
}

std::pair<SparseSpdMatrix, Vec> gen_fem_cube(const FemCubeSpec& spec) {
  require_arg(spec.elements_per_edge >= 1, "elements_per_edge must be >= 1");
  require_arg(spec.spring_scale > 0.0, "spring_scale must be positive");
  const int ne = spec.elements_per_edge;
  const int nn = ne + 1;
  const double h = 1.0 / ne;  // unit cube
  const Mat Ke = fem_hex_element_stiffness(spec.youngs_modulus, spec.poisson_ratio, h);

  static const int corner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                   {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  const auto node = [nn](int ix, int iy, int iz) {
    return static_cast<Index>(ix) + static_cast<Index>(nn) * (iy + static_cast<Index>(nn) * iz);
  };
  const Index n = 3 * static_cast<Index>(nn) * nn * nn;

  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(ne) * ne * ne * 576 + 24);
  for (int ez = 0; ez < ne; ++ez)
    for (int ey = 0; ey < ne; ++ey)
      for (int ex = 0; ex < ne; ++ex) {
        Index dof[24];
        for (int i = 0; i < 8; ++i) {
          const Index g = node(ex + corner[i][0], ey + corner[i][1], ez + corner[i][2]);
          dof[3 * i] = 3 * g;
          dof[3 * i + 1] = 3 * g + 1;
          dof[3 * i + 2] = 3 * g + 2;
        }
        for (int i = 0; i < 24; ++i)
          for (int j = 0; j < 24; ++j) entries.push_back({dof[i], dof[j], Ke(i, j)});
      }

  // Grounded corner springs on all three translations; the reference
  // stiffness E·h is commensurate with the element stiffness entries.
  const double k_spring = spec.spring_scale * spec.youngs_modulus * h;
  for (int iz = 0; iz <= ne; iz += ne)
    for (int iy = 0; iy <= ne; iy += ne)
      for (int ix = 0; ix <= ne; ix += ne) {
        const Index g = node(ix, iy, iz);
        for (int d = 0; d < 3; ++d) entries.push_back({3 * g + d, 3 * g + d, k_spring});
      }

  Vec b = Vec::Zero(n);
  const int c = (ne + 1) / 2;  // centre grid index (nearest node for odd ne)
  b(3 * node(c, c, ne) + 2) = -spec.load_magnitude;

  return {SparseSpdMatrix::from_triplets(n, std::move(entries)), std::move(b)};
}

namespace {

// Reads the next non-comment, non-empty line.
bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '%') continue;
    return true;
  }
  return false;
}

struct MmBanner {
  std::string format;    // coordinate | array
  std::string field;     // real | integer | complex | pattern
  std::string symmetry;  // general | symmetric | ...
};

MmBanner read_banner(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream header(line);
  std::string tag, object;
  MmBanner banner;
  header >> tag >> object >> banner.format >> banner.field >> banner.symmetry;
  if (lower(tag) != "%%matrixmarket" || lower(object) != "matrix")
    throw FormatError("not a Matrix Market matrix file: " + path);
  banner.format = lower(banner.format);
  banner.field = lower(banner.field);
  banner.symmetry = lower(banner.symmetry);
  return banner;
}

}  // namespace

SparseSpdMatrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open file: " + path);
  const MmBanner banner = read_banner(in, path);
  if (banner.format != "coordinate") throw FormatError("matrix must use coordinate format: " + path);
  if (banner.field != "real") throw FormatError("matrix field must be real: " + path);
  if (banner.symmetry != "symmetric" && banner.symmetry != "general")
    throw FormatError("matrix symmetry must be symmetric or general: " + path);

  std::string line;
  if (!next_content_line(in, line)) throw FormatError("missing size line: " + path);
  Index rows = 0, cols = 0;
  long long nnz = 0;
  {
    std::stringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) throw FormatError("bad size line: " + path);
  }
  if (rows != cols) throw FormatError("matrix must be square: " + path);

  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(banner.symmetry == "symmetric" ? 2 * nnz : nnz));
  for (long long k = 0; k < nnz; ++k) {
    if (!next_content_line(in, line)) throw FormatError("unexpected end of entries: " + path);
    std::stringstream ss(line);
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> i >> j >> v)) throw FormatError("bad entry line: " + line);
    if (i < 1 || i > rows || j < 1 || j > cols) throw FormatError("entry index out of range: " + line);
    entries.push_back({i - 1, j - 1, v});
    if (banner.symmetry == "symmetric" && i != j) entries.push_back({j - 1, i - 1, v});
  }
  return SparseSpdMatrix::from_triplets(rows, std::move(entries));
}

void save_matrix_market(const std::string& path, const SparseSpdMatrix& A) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open file for writing: " + path);
  const auto& offsets = A.row_offsets();
  const auto& cols = A.col_indices();
  const auto& vals = A.values();
  long long lower_nnz = 0;
  for (Index i = 0; i < A.rows(); ++i)
    for (Index k = offsets[i]; k < offsets[i + 1]; ++k)
      if (cols[k] <= i) ++lower_nnz;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << A.rows() << ' ' << A.cols() << ' ' << lower_nnz << "\n";
  for (Index i = 0; i < A.rows(); ++i)
    for (Index k = offsets[i]; k < offsets[i + 1]; ++k)
      if (cols[k] <= i) out << (i + 1) << ' ' << (cols[k] + 1) << ' ' << fmt17(vals[k]) << "\n";
}

Vec load_rhs_array(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open file: " + path);
  const MmBanner banner = read_banner(in, path);
  if (banner.format != "array") throw FormatError("right-hand side must use array format: " + path);
  if (banner.field != "real") throw FormatError("right-hand side field must be real: " + path);
  std::string line;
  if (!next_content_line(in, line)) throw FormatError("missing size line: " + path);
  Index rows = 0, cols = 0;
  {
    std::stringstream ss(line);
    if (!(ss >> rows >> cols)) throw FormatError("bad size line: " + path);
  }
  if (cols != 1) throw FormatError("right-hand side must have one column: " + path);
  Vec b(rows);
  for (Index i = 0; i < rows; ++i) {
    if (!next_content_line(in, line)) throw FormatError("unexpected end of values: " + path);
    std::stringstream ss(line);
    if (!(ss >> b(i))) throw FormatError("bad value line: " + line);
  }
  return b;
}

void save_rhs_array(const std::string& path, const Vec& b) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open file for writing: " + path);
  out << "%%MatrixMarket matrix array real general\n";
  out << b.size() << " 1\n";
  for (Index i = 0; i < b.size(); ++i) out << fmt17(b(i)) << "\n";
}

ConditionEstimate estimate_condition(const SparseSpdMatrix& A, int iters, uint64_t seed) {
  require_arg(iters >= 20, "iters must be >= 20");
  const Index n = A.rows();
  const int max_steps = static_cast<int>(std::min<Index>(iters, n));
  const bool full_reorth = n <= 2000;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = gauss(rng);
  v /= norm2(v);

  std::vector<double> alphas, betas;  // betas[k] couples steps k and k+1
  Mat V;
  if (full_reorth) V.resize(n, max_steps);
  Vec v_prev = Vec::Zero(n);
  double beta_prev = 0.0;
  double scale = 0.0;
  ConditionEstimate est;

  for (int k = 0; k < max_steps; ++k) {
    if (full_reorth) V.col(k) = v;
    Vec w = spmv(A, v);
    const double alpha = dot(v, w);
    alphas.push_back(alpha);
    scale = std::max(scale, std::abs(alpha) + beta_prev);
    w -= alpha * v;
    if (k > 0) w -= beta_prev * v_prev;
    if (full_reorth) {
      // Two passes of classical Gram-Schmidt against all previous vectors.
      const auto cols_so_far = V.leftCols(k + 1);
      w -= cols_so_far * (cols_so_far.transpose() * w).eval();
      w -= cols_so_far * (cols_so_far.transpose() * w).eval();
    }
    const double beta = norm2(w);
    if (k + 1 == max_steps) break;
    if (beta <= 1e-13 * std::max(scale, 1e-300)) {
      est.breakdown = true;  // invariant subspace found early
      break;
    }
    betas.push_back(beta);
    v_prev = v;
    v = w / beta;
    beta_prev = beta;
  }

  const int k = static_cast<int>(alphas.size());
  Mat T = Mat::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = alphas[static_cast<size_t>(i)];
    if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = betas[static_cast<size_t>(i)];
  }
  const Eigen::SelfAdjointEigenSolver<Mat> eig(T);
  est.lambda_max = eig.eigenvalues().maxCoeff();
  est.lambda_min = eig.eigenvalues().minCoeff();
  est.kappa = est.lambda_max / est.lambda_min;
  est.iterations = k;
  return est;
}

}  // namespace irm
