#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "neuromod/transfer.hpp"

using namespace neuromod;
using Catch::Approx;

namespace {

// exp by Taylor series in long double, independent of the library tanh
long double exp_series(long double x) {
  long double term = 1, sum = 1;
  for (int k = 1; k < 80; ++k) {
    term *= x / k;
    sum += term;
  }
  return sum;
}

long double tanh_oracle(long double x) {
  const long double e = exp_series(2 * x);
  return (e - 1) / (e + 1);
}

}  // namespace

TEST_CASE("transfer values at the origin") {
  CHECK(evaluate(TransferFunction<>::unipolar(), 0.0) == 0.5);
  CHECK(evaluate(TransferFunction<>::bipolar(0.3), 0.0) == 0.0);
  CHECK(derivative(TransferFunction<>::unipolar(), 0.0) == 0.25);
  CHECK(derivative(TransferFunction<>::bipolar(1.0), 0.0) == 1.0);
  CHECK(derivative(TransferFunction<>::bipolar(0.3), 0.0) == Approx(0.3).epsilon(1e-15));
}

TEST_CASE("bipolar gain 0.3 at x = 3 matches tanh(0.9)") {
  const double v = evaluate(TransferFunction<>::bipolar(0.3), 3.0);
  const double oracle = static_cast<double>(tanh_oracle(0.9L));
  CHECK(std::abs(v - oracle) < 1e-15);
  CHECK(std::abs(v - 0.716298) < 1e-6);
}

TEST_CASE("unipolar slope at x = 2 matches a central difference") {
  const auto tf = TransferFunction<>::unipolar();
  const double h = 1e-6;
  const double fd = (evaluate(tf, 2.0 + h) - evaluate(tf, 2.0 - h)) / (2 * h);
  CHECK(std::abs(derivative(tf, 2.0) - fd) < 1e-9);
  CHECK(std::abs(derivative(tf, 2.0) - 0.104994) < 1e-6);
}

TEST_CASE("derivative agrees with finite differences on [-20, 20]") {
  const double h = 1e-6;
  for (auto tf : {TransferFunction<>::unipolar(), TransferFunction<>::bipolar(1.0),
                  TransferFunction<>::bipolar(0.3), TransferFunction<>::bipolar(2.5)}) {
    for (int i = 0; i <= 4000; ++i) {
      const double x = -20.0 + 0.01 * i;
      const double fd = (evaluate(tf, x + h) - evaluate(tf, x - h)) / (2 * h);
      REQUIRE(std::abs(derivative(tf, x) - fd) < 1e-6);
    }
  }
}

TEST_CASE("closed-form derivative identities") {
  const auto uni = TransferFunction<>::unipolar();
  for (int i = 0; i <= 4000; ++i) {
    const double x = -40.0 + 0.02 * i;
    const double s = evaluate(uni, x);
    REQUIRE(std::abs(derivative(uni, x) - s * (1 - s)) < 1e-12);
    for (double g : {0.3, 1.0, 2.0}) {
      const auto bi = TransferFunction<>::bipolar(g);
      const double t = evaluate(bi, x);
      REQUIRE(std::abs(derivative(bi, x) - g * (1 - t * t)) < 1e-12);
      REQUIRE(std::abs(evaluate(bi, -x) + t) <= 1e-15);
    }
  }
}

TEST_CASE("range, positivity and monotonicity") {
  const auto uni = TransferFunction<>::unipolar();
  const auto bi = TransferFunction<>::bipolar(0.7);
  double prev_u = -1, prev_b = -2;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -20.0 + 0.02 * i;
    const double u = evaluate(uni, x), b = evaluate(bi, x);
    REQUIRE(u > 0);
    REQUIRE(u < 1);
    REQUIRE(b > -1);
    REQUIRE(b < 1);
    REQUIRE(u > prev_u);
    REQUIRE(b > prev_b);
    REQUIRE(derivative(uni, x) > 0);
    REQUIRE(derivative(bi, x) > 0);
    prev_u = u;
    prev_b = b;
  }
}

TEST_CASE("saturation does not overflow") {
  const auto uni = TransferFunction<>::unipolar();
  CHECK(evaluate(uni, -1000.0) >= 0.0);
  CHECK(std::isfinite(evaluate(uni, -1000.0)));
  CHECK(evaluate(uni, 1000.0) == 1.0);
  CHECK(std::isfinite(derivative(uni, -800.0)));
  CHECK(std::isfinite(derivative(TransferFunction<>::bipolar(1.0), 800.0)));
  CHECK(evaluate(uni, -40.0) == Approx(4.248354255291589e-18).epsilon(1e-12));
}

TEST_CASE("non-finite input is a domain error") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  for (auto tf : {TransferFunction<>::unipolar(), TransferFunction<>::bipolar(1.0)}) {
    CHECK_THROWS_AS(evaluate(tf, nan), DomainError);
    CHECK_THROWS_AS(evaluate(tf, inf), DomainError);
    CHECK_THROWS_AS(derivative(tf, -inf), DomainError);
  }
}

TEST_CASE("long double instantiation") {
  const auto tf = TransferFunction<long double>::bipolar(0.3L);
  CHECK(std::abs(evaluate(tf, 3.0L) - tanh_oracle(0.9L)) < 1e-17L);
}
