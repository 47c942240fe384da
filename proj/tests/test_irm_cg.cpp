#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <irm/engine.hpp>
#include <irm/irm_cg.hpp>
#include <irm/linalg.hpp>
#include <irm/rational.hpp>
#include <irm/solvers.hpp>
#include <irm/sparse_spd.hpp>
#include <irm/types.hpp>

namespace {

irm::SparseSpdMatrix identity(irm::Index n) {
  std::vector<irm::Triplet> t;
  for (irm::Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return irm::SparseSpdMatrix::from_triplets(n, t);
}

irm::SparseSpdMatrix diag2(double d0, double d1) {
  std::vector<irm::Triplet> t = {{0, 0, d0}, {1, 1, d1}};
  return irm::SparseSpdMatrix::from_triplets(2, t);
}

irm::SparseSpdMatrix tridiag(irm::Index n) {
  std::vector<irm::Triplet> t;
  for (irm::Index i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i + 1 < n) {
      t.push_back({i, i + 1, -1.0});
      t.push_back({i + 1, i, -1.0});
    }
  }
  return irm::SparseSpdMatrix::from_triplets(n, t);
}

irm::SparseSpdMatrix diag_geometric(irm::Index n, double first, double last) {
  std::vector<irm::Triplet> t;
  for (irm::Index i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    t.push_back({i, i, first * std::pow(last / first, f)});
  }
  return irm::SparseSpdMatrix::from_triplets(n, t);
}

}  // namespace

TEST_CASE("two steps solve a 2x2 diagonal system exactly") {
  // The first residual's informative part has size ~2/κ but is computed with
  // absolute round-off ~ε, so every double-precision two-step solve carries a
  // relative floor of order ε·κ/4 (measured ~4e-13 at κ=1e4, ~4e-9 at κ=1e8).
  // The tolerances below pin that floor with a 5x margin.
  for (double kappa : {10.0, 1e4, 1e8}) {
    const double tol = kappa <= 1e4 ? 2e-12 : 2e-8;
    auto a = diag2(1.0, kappa);
    irm::Vec b(2);
    b << 1.0, 1.0;
    irm::SolveConfig config;

    irm::Vec exact(2);
    exact << 1.0, 1.0 / kappa;

    auto basic = irm::init_steepest_descent(a, b, irm::Vec::Zero(2));
    irm::irm_cg_step_basic(a, b, basic, config);
    irm::irm_cg_step_basic(a, b, basic, config);
    CHECK((basic.x - exact).norm() <= tol * exact.norm());
    CHECK((b - irm::spmv(a, basic.x)).norm() <= tol * b.norm());

    auto fast = irm::init_steepest_descent(a, b, irm::Vec::Zero(2));
    irm::irm_cg_step_fast(a, b, fast, config);
    irm::irm_cg_step_fast(a, b, fast, config);
    CHECK((fast.x - exact).norm() <= tol * exact.norm());
    CHECK((b - irm::spmv(a, fast.x)).norm() <= tol * b.norm());
  }
}

TEST_CASE("on the identity the first step finishes and later steps are no-ops") {
  auto a = identity(6);
  irm::Vec b(6);
  b << 1.0, -2.0, 0.5, 3.0, 0.0, 4.0;
  auto state = irm::init_steepest_descent(a, b, irm::Vec::Zero(6));
  irm::SolveConfig config;
  irm::irm_cg_step_basic(a, b, state, config);
  CHECK((state.x - b).norm() == 0.0);
  CHECK(state.rho == 0.0);
  const irm::Vec x_after_first = state.x;
  irm::irm_cg_step_basic(a, b, state, config);
  CHECK((state.x - x_after_first).norm() == 0.0);
  irm::irm_cg_step_basic(a, b, state, config);
  CHECK((state.x - x_after_first).norm() == 0.0);
}

TEST_CASE("fast and basic variants stay together over thirty steps") {
  auto a = tridiag(200);
  irm::Vec b = irm::Vec::Ones(200);
  irm::SolveConfig config;  // refresh period 50: no refresh inside 30 steps
  auto basic = irm::init_steepest_descent(a, b, irm::Vec::Zero(200));
  auto fast = basic;
  for (int step = 0; step < 30; ++step) {
    irm::irm_cg_step_basic(a, b, basic, config);
    irm::irm_cg_step_fast(a, b, fast, config);
    const double xs = std::max(basic.x.cwiseAbs().maxCoeff(), 1.0);
    CHECK((basic.x - fast.x).cwiseAbs().maxCoeff() <= 1e-10 * xs);
  }
}

TEST_CASE("the fast variant costs one product per step plus two per refresh") {
  auto a = tridiag(80);
  irm::Vec b = irm::Vec::Ones(80);

  irm::SolveConfig far_refresh;
  far_refresh.i_max = 1000000;
  auto state = irm::init_steepest_descent(a, b, irm::Vec::Zero(80));
  CHECK(state.spmv_count == 2);
  for (int step = 1; step <= 12; ++step) {
    irm::irm_cg_step_fast(a, b, state, far_refresh);
    CHECK(state.spmv_count == 2 + step);
  }

  irm::SolveConfig near_refresh;
  near_refresh.i_max = 5;
  state = irm::init_steepest_descent(a, b, irm::Vec::Zero(80));
  for (int step = 1; step <= 12; ++step) {
    irm::irm_cg_step_fast(a, b, state, near_refresh);
    CHECK(state.spmv_count == 2 + step + 2 * (step / 5));
  }
}

TEST_CASE("a refresh period of one makes the fast step identical to the basic step") {
  auto a = tridiag(60);
  irm::Vec b = irm::Vec::Ones(60);
  irm::SolveConfig config;
  config.i_max = 1;
  auto basic = irm::init_steepest_descent(a, b, irm::Vec::Zero(60));
  auto fast = basic;
  for (int step = 0; step < 10; ++step) {
    irm::irm_cg_step_basic(a, b, basic, config);
    irm::irm_cg_step_fast(a, b, fast, config);
    CHECK((basic.x - fast.x).norm() == 0.0);
    CHECK((basic.r - fast.r).norm() == 0.0);
    CHECK((basic.p - fast.p).norm() == 0.0);
    CHECK((basic.beta - fast.beta).norm() == 0.0);
    CHECK(basic.rho == fast.rho);
  }
  // Every step of the refresh-each-time path costs the same three products as
  // the basic step.
  CHECK(fast.spmv_count == basic.spmv_count);
}

TEST_CASE("refreshing never touches the iterate and restores the exact residual") {
  auto a = tridiag(100);
  irm::Vec b = irm::Vec::Ones(100);
  irm::SolveConfig config;
  config.i_max = 1000000;
  auto state = irm::init_steepest_descent(a, b, irm::Vec::Zero(100));
  for (int step = 0; step < 30; ++step) irm::irm_cg_step_fast(a, b, state, config);

  // Recursive residual drift stays far below the stated bound.
  const irm::Vec r_true = b - irm::spmv(a, state.x);
  CHECK((state.r - r_true).norm() <= 1e-6 * irm::norm2(b));

  const irm::Vec x_before = state.x;
  irm::maybe_refresh(a, b, state, 1.0, state.iter + 1);  // force a refresh now
  CHECK((state.x - x_before).norm() == 0.0);
  CHECK((state.r - (b - irm::spmv(a, state.x))).norm() == 0.0);
  CHECK((state.beta - irm::spmv(a, state.p)).norm() == 0.0);
}

TEST_CASE("each step leaves the incoming plane residual-orthogonal") {
  auto a = tridiag(50);
  irm::Vec b = irm::Vec::Ones(50);
  irm::SolveConfig config;
  auto state = irm::init_steepest_descent(a, b, irm::Vec::Zero(50));
  for (int step = 0; step < 6; ++step) {
    irm::irm_cg_step_basic(a, b, state, config);
    // With omega = 1 the residual after applying the new increment is
    // orthogonal to the plane, hence to both r and the new p inside it.
    const irm::Vec r_next = state.r - state.beta;
    const double scale = irm::norm2(r_next) * irm::norm2(state.r) + 1e-30;
    CHECK(std::abs(irm::dot(r_next, state.r)) <= 1e-8 * scale);
    const double pscale = irm::norm2(r_next) * irm::norm2(state.p) + 1e-30;
    CHECK(std::abs(irm::dot(r_next, state.p)) <= 1e-8 * pscale);
  }
}

TEST_CASE("cached cross products agree with their definitions") {
  auto a = tridiag(40);
  irm::Vec b = irm::Vec::Ones(40);
  irm::SolveConfig config;
  auto state = irm::init_steepest_descent(a, b, irm::Vec::Zero(40));
  for (int step = 0; step < 5; ++step) {
    irm::irm_cg_step_basic(a, b, state, config);
    const double lhs = irm::dot(state.r, irm::spmv(a, state.p));
    const double rhs = irm::dot(state.p, irm::spmv(a, state.r));
    const double scale =
        irm::norm2(state.r) * irm::norm2(state.p) * 4.0 + 1e-30;  // ||A|| <= 4
    CHECK(std::abs(lhs - rhs) <= 1e-11 * scale);
  }
}

TEST_CASE("under-relaxation keeps the energy strictly decreasing") {
  auto a = diag_geometric(30, 1.0, 1e4);
  irm::Vec b = irm::Vec::Ones(30);
  irm::SolveConfig config;
  config.omega = {0.5};
  auto state = irm::init_steepest_descent(a, b, irm::Vec::Zero(30));
  double f_prev = irm::energy(a, b, state.x);
  for (int step = 0; step < 20; ++step) {
    irm::irm_cg_step_fast(a, b, state, config);
    const double f = irm::energy(a, b, state.x);
    CHECK(f < f_prev);
    f_prev = f;
  }
}

TEST_CASE("heavy over-relaxation still converges, only more slowly") {
  auto a = diag_geometric(5, 1.0, 10.0);
  irm::Vec b = irm::Vec::Ones(5);
  irm::SolveConfig config;
  config.omega = {1.99};
  config.eps = 1e-8;
  config.n_max = 5000;
  auto unrelaxed = config;
  unrelaxed.omega = {};
  auto slow = irm::irm_cg_solve(a, b, irm::Vec::Zero(5), config, irm::IrmCgVariant::fast);
  auto ref = irm::irm_cg_solve(a, b, irm::Vec::Zero(5), unrelaxed, irm::IrmCgVariant::fast);
  CHECK(slow.status == irm::SolveStatus::converged);
  CHECK(ref.status == irm::SolveStatus::converged);
  CHECK(slow.trace.records.back().iter > ref.trace.records.back().iter);
}

TEST_CASE("exact arithmetic lands on the solution after two steps") {
  using R = irm::ExactRational;
  irm::MatT<R> a(2, 2);
  a << R(1), R(0), R(0), R(7);
  irm::VecT<R> b(2);
  b << R(1), R(1);
  irm::VecT<R> x0(2);
  x0 << R(0), R(0);
  auto state = irm::init_steepest_descent(a, b, x0);
  CHECK(state.p(0) == R(1, 4));  // q = 2/8
  irm::irm_cg_step_basic(a, b, state, R(1), R(0));
  irm::irm_cg_step_basic(a, b, state, R(1), R(0));
  CHECK(state.x(0) == R(1));
  CHECK(state.x(1) == R(1, 7));
  CHECK(state.rho == R(0));
}
