#include <doctest.h>

#include <cmath>
#include <sstream>

#include <irm/linalg.hpp>
#include <irm/rational.hpp>
#include <irm/types.hpp>

using irm::ExactRational;

TEST_CASE("rational addition reduces to lowest terms") {
  ExactRational a(1, 3), b(1, 6);
  ExactRational s = a + b;
  CHECK(s == ExactRational(1, 2));
  CHECK(s.to_string() == "1/2");
}

TEST_CASE("rational construction normalises sign and common factors") {
  CHECK(ExactRational(2, 4) == ExactRational(1, 2));
  CHECK(ExactRational(-2, 4) == ExactRational(1, -2));
  CHECK(ExactRational(3, -9) == ExactRational(-1, 3));
  CHECK(ExactRational(0, 7) == ExactRational(0));
}

TEST_CASE("rational field axioms on sample values") {
  ExactRational a(7, 12), b(-5, 8), c(13, 10);
  CHECK(a + b == b + a);
  CHECK((a + b) + c == a + (b + c));
  CHECK(a * (b + c) == a * b + a * c);
  CHECK(a * (ExactRational(1) / a) == ExactRational(1));
  CHECK(a - a == ExactRational(0));
  CHECK(a / b * b == a);
}

TEST_CASE("rational comparisons are exact") {
  CHECK(ExactRational(1, 3) < ExactRational(1, 2));
  CHECK(ExactRational(-1, 2) < ExactRational(-1, 3));
  CHECK(ExactRational(5, 10) <= ExactRational(1, 2));
  CHECK(ExactRational(7, 3) > ExactRational(2));
  CHECK(ExactRational(1, 1000000) != ExactRational(0));
}

TEST_CASE("rational arithmetic survives large intermediate values") {
  // (10^12 / 3) * (3 / 10^12) must come back to exactly 1 even though the
  // intermediate numerator exceeds 64 bits when cross-multiplied further.
  ExactRational big(1000000000000LL, 3);
  ExactRational inv(3, 1000000000000LL);
  CHECK(big * inv == ExactRational(1));

  // Repeated squaring: ((17/13)^8) * ((13/17)^8) == 1.
  ExactRational p(17, 13), q(13, 17), prod(1);
  for (int i = 0; i < 8; ++i) prod = prod * p;
  for (int i = 0; i < 8; ++i) prod = prod * q;
  CHECK(prod == ExactRational(1));
}

TEST_CASE("rational to_double matches the quotient") {
  CHECK(ExactRational(1, 3).to_double() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(ExactRational(-7, 2).to_double() == -3.5);
  CHECK(ExactRational(0).to_double() == 0.0);

  // Huge but cancelling magnitudes stay finite and accurate.
  ExactRational r(1, 1);
  for (int i = 0; i < 40; ++i) r = r * ExactRational(10);
  for (int i = 0; i < 40; ++i) r = r / ExactRational(10);
  CHECK(r.to_double() == 1.0);
}

TEST_CASE("rational abs and unary minus") {
  ExactRational a(-3, 4);
  CHECK(abs(a) == ExactRational(3, 4));
  CHECK(-a == ExactRational(3, 4));
  CHECK(abs(ExactRational(0)) == ExactRational(0));
}

TEST_CASE("rational streams as numerator slash denominator") {
  std::ostringstream os;
  os << ExactRational(-22, 8);
  CHECK(os.str() == "-11/4");
}

TEST_CASE("Eigen vectors over rationals compute exact inner products") {
  irm::VecT<ExactRational> u(2), v(2);
  u << ExactRational(1, 3), ExactRational(2, 5);
  v << ExactRational(3, 7), ExactRational(5, 11);
  // 1/3*3/7 + 2/5*5/11 = 1/7 + 2/11 = 25/77
  CHECK(irm::dot(u, v) == ExactRational(25, 77));
  CHECK(irm::squared_norm(u) == ExactRational(1, 9) + ExactRational(4, 25));
}

TEST_CASE("Eigen matrix-vector products over rationals are exact") {
  irm::MatT<ExactRational> A(2, 2);
  A << ExactRational(1), ExactRational(0), ExactRational(0), ExactRational(10000);
  irm::VecT<ExactRational> x(2);
  x << ExactRational(1), ExactRational(1, 10000);
  irm::VecT<ExactRational> y = irm::spmv(A, x);
  CHECK(y(0) == ExactRational(1));
  CHECK(y(1) == ExactRational(1));
}

TEST_CASE("rational axpy matches hand computation") {
  irm::VecT<ExactRational> u(2), v(2);
  u << ExactRational(1, 2), ExactRational(1, 3);
  v << ExactRational(1, 5), ExactRational(1, 7);
  irm::VecT<ExactRational> w = irm::axpy(ExactRational(2, 3), u, v);
  CHECK(w(0) == ExactRational(1, 5) + ExactRational(1, 3));
  CHECK(w(1) == ExactRational(1, 7) + ExactRational(2, 9));
}
