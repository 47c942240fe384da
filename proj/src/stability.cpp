#include "irm/stability.hpp"

#include <cstdio>
#include <ostream>

namespace irm {

namespace {
std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

Vec run_disturbed(DisturbedMethod method, const DisturbedCase& c) {
  require_arg(c.kappa >= 1.0, "kappa must be >= 1");
  if (method == DisturbedMethod::cg) return run_disturbed_cg<double>(c.kappa, c.delta);
  return run_disturbed_irm_cg<double>(c.kappa, c.delta);
}

Vec perturbed_cg_closed_form(const DisturbedCase& c) {
  require_arg(c.kappa >= 1.0, "kappa must be >= 1");
  return perturbed_cg_closed_form<double>(c.kappa, c.delta);
}

std::vector<double> grid_points(const DeltaGrid& grid) {
  require_arg(grid.count >= 1, "grid needs at least one point");
  require_arg(grid.lo <= grid.hi, "grid bounds out of order");
  std::vector<double> points;
  points.reserve(static_cast<size_t>(grid.count));
  if (grid.count == 1) {
    points.push_back(grid.lo);
    return points;
  }
  const double step = (grid.hi - grid.lo) / (grid.count - 1);
  for (int i = 0; i < grid.count; ++i) points.push_back(grid.lo + step * i);
  return points;
}

std::vector<SweepRow> sweep_fig1(const std::vector<double>& kappas, const DeltaGrid& grid) {
  require_arg(!kappas.empty(), "kappa list must be non-empty");
  const std::vector<double> deltas = grid_points(grid);
  std::vector<SweepRow> rows;
  rows.reserve(kappas.size() * deltas.size());
  for (double kappa : kappas) {
    require_arg(kappa >= 1.0, "kappa must be >= 1");
    for (double delta : deltas) {
      const Vec xt = perturbed_cg_closed_form<double>(kappa, delta);
      SweepRow row;
      row.kappa = kappa;
      row.delta = delta;
      row.err_x1 = xt(0) - 1.0;
      row.err_x2 = xt(1) - 1.0 / kappa;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "kappa,delta,err_x1,err_x2\n";
  for (const SweepRow& row : rows)
    out << fmt17(row.kappa) << ',' << fmt17(row.delta) << ',' << fmt17(row.err_x1) << ',' << fmt17(row.err_x2)
        << "\n";
}

VecT<ExactRational> rational_two_step_oracle(const ExactRational& kappa) {
  require_arg(kappa > ExactRational(0), "kappa must be positive");
  const MatT<ExactRational> A = detail::disturbed_matrix(kappa);
  VecT<ExactRational> b(2);
  b(0) = ExactRational(1);
  b(1) = ExactRational(1);
  SolverStateT<ExactRational> state = init_steepest_descent(A, b, VecT<ExactRational>::Zero(2).eval());
  const ExactRational one(1);
  const ExactRational tol(0);
  for (int step = 0; step < 2; ++step) {
    if (squared_norm(state.r) == ExactRational(0)) break;
    irm_cg_step_basic(A, b, state, one, tol);
  }
  return state.x;
}

}  // namespace irm
