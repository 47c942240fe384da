#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace irm {

template <class Scalar>
using VecT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = VecT<double>;
using Mat = MatT<double>;
using Index = Eigen::Index;

// The subspace produced no usable direction: every pivot of the reduced
// system was dropped while the reduced residual is nonzero.
struct DegenerateBasisError : std::runtime_error {
  explicit DegenerateBasisError(const std::string& detail = "")
      : std::runtime_error("degenerate basis" + (detail.empty() ? "" : ": " + detail)) {}
};

// A quadratic form that should be positive turned out nonpositive; the
// operator is not symmetric positive definite.
struct NotPositiveDefiniteError : std::runtime_error {
  explicit NotPositiveDefiniteError(const std::string& detail = "")
      : std::runtime_error("not positive definite" + (detail.empty() ? "" : ": " + detail)) {}
};

struct NotSymmetricError : std::runtime_error {
  explicit NotSymmetricError(const std::string& detail = "")
      : std::runtime_error("not symmetric" + (detail.empty() ? "" : ": " + detail)) {}
};

// The closed-form disturbed solution has a vanishing denominator at this
// (delta, kappa) pair.
struct SingularPerturbationError : std::runtime_error {
  SingularPerturbationError() : std::runtime_error("singular perturbation") {}
};

// Malformed or unsupported file content.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& detail) : std::runtime_error("format error: " + detail) {}
};

inline void require_arg(bool condition, const char* what) {
  if (!condition) throw std::invalid_argument(what);
}

enum class SolveStatus { converged, max_iterations, error };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max-iterations";
    default: return "error";
  }
}

enum class TraceLevel { light, full };

struct SolveConfig {
  double eps = 1e-10;        // relative residual tolerance
  Index n_max = 1000;        // maximum number of steps (x updates)
  Index i_max = 50;          // refresh period for the recursive-residual path
  std::vector<double> omega; // per-step relaxation factors; empty means constant 1
  double pivot_tol = 1e-12;  // relative pivot-drop threshold of the reduced solve
  int m_max = 8;             // maximum subspace dimension
  TraceLevel trace_level = TraceLevel::light;
};

// Relaxation factor for the (0-based) step index; the last listed value is
// held for all later steps.
inline double omega_at(const SolveConfig& config, Index step) {
  if (config.omega.empty()) return 1.0;
  const auto i = static_cast<size_t>(step);
  return i < config.omega.size() ? config.omega[i] : config.omega.back();
}

inline void validate(const SolveConfig& config) {
  require_arg(config.eps > 0.0 && config.eps < 1.0, "eps must lie in (0,1)");
  require_arg(config.n_max >= 1, "n_max must be >= 1");
  require_arg(config.i_max >= 1, "i_max must be >= 1");
  require_arg(config.pivot_tol > 0.0, "pivot_tol must be positive");
  require_arg(config.m_max >= 1, "m_max must be >= 1");
  for (double w : config.omega)
    require_arg(w > 0.0 && w < 2.0, "every omega must lie in (0,2)");
}

}  // namespace irm
