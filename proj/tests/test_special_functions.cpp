#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstdint>

#include "omx/errors.hpp"
#include "omx/special_functions.hpp"
#include "support.hpp"

using namespace omx;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Direct summation of sum_k (-n)_k / (m)_k x^k / k! in 50-digit arithmetic.
double series_1f1(int n, int m, double x) {
  big sum = 1;
  big term = 1;
  const big bx = x;
  for (int k = 0; k < n; ++k) {
    term *= big(k - n) / big(m + k) * bx / big(k + 1);
    sum += term;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("hyp1f1 examples") {
  CHECK(hyp1f1_neg_int(0, 1, 3.0) == 1.0);
  CHECK(hyp1f1_neg_int(0, 7, 0.0) == 1.0);
  CHECK(hyp1f1_neg_int(1, 2, 0.01) == doctest::Approx(0.995).epsilon(1e-15));
  CHECK(hyp1f1_neg_int(2, 3, 1.0) == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("hyp1f1 domain errors") {
  CHECK_THROWS_AS(hyp1f1_neg_int(-1, 1, 0.5), DomainError);
  CHECK_THROWS_AS(hyp1f1_neg_int(2, 0, 0.5), DomainError);
  CHECK_THROWS_AS(hyp1f1_neg_int(2, 1, -0.5), DomainError);
  CHECK_THROWS_AS(hyp1f1_neg_int(2, 1, std::nan("")), DomainError);
  CHECK_THROWS_AS(make_fock_diagonal_factor(4, -1, 0.1), DomainError);
}

TEST_CASE("recurrence agrees with the series on the reference grid") {
  const double xs[] = {0.0001, 0.01, 0.25, 1.0, 4.0};
  double worst = 0.0;
  for (int p = 0; p <= 4; ++p)
    for (double x : xs)
      for (int n = 0; n <= 60; ++n) {
        const double ref = series_1f1(n, p + 1, x);
        const double got = hyp1f1_neg_int(n, p + 1, x);
        worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
      }
  CHECK(worst < 1e-10);
}

TEST_CASE("recurrence agrees with the series at random arguments") {
  test::Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(0, 40);
    const int m = rng.integer(1, 6);
    const double x = rng.uniform(0.0, 2.0);
    const double ref = series_1f1(n, m, x);
    CHECK(hyp1f1_neg_int(n, m, x) == doctest::Approx(ref).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("d_n is a polynomial of degree n in x") {
  // Forward differences of order n+1 with step h vanish; scaled by h^(n+1).
  const double h = 0.1;
  for (int p = 0; p <= 3; ++p)
    for (int n = 0; n <= 8; ++n) {
      const int order = n + 1;
      double diff = 0.0;
      double binom = 1.0;
      for (int k = 0; k <= order; ++k) {
        const double sign = ((order - k) % 2 == 0) ? 1.0 : -1.0;
        diff += sign * binom * hyp1f1_neg_int(n, p + 1, 0.2 + k * h);
        binom = binom * (order - k) / (k + 1);
      }
      CHECK(std::abs(diff) < 1e-8);
    }
}

TEST_CASE("associated Laguerre identity") {
  // 1F1(-n; p+1; x) = n! p! / (n+p)! L_n^(p)(x)
  for (int p = 0; p <= 4; ++p)
    for (int n = 0; n <= 15; ++n) {
      const double x = 0.3 + 0.1 * n;
      const double scale = factorial(n) * factorial(p) / factorial(n + p);
      CHECK(hyp1f1_neg_int(n, p + 1, x) ==
            doctest::Approx(scale * assoc_laguerre(n, p, x)).epsilon(1e-12));
    }
  CHECK(assoc_laguerre(1, 0, 0.5) == doctest::Approx(0.5));
  CHECK(assoc_laguerre(2, 1, 1.0) == doctest::Approx(0.5));  // (x^2 - 6x + 6) / 2 at 1
}

TEST_CASE("factorial") {
  CHECK(factorial(0) == 1.0);
  CHECK(factorial(5) == 120.0);
  CHECK(factorial(20) == static_cast<double>(std::uint64_t{2432902008176640000ULL}));
  std::uint64_t exact = 1;
  for (int p = 1; p <= 20; ++p) {
    exact *= static_cast<std::uint64_t>(p);
    CHECK(factorial(p) == static_cast<double>(exact));
  }
  CHECK(std::isfinite(factorial(170)));
  CHECK_THROWS_AS(factorial(171), OverflowError);
  CHECK_THROWS_AS(factorial(-1), DomainError);
}

TEST_CASE("Fock diagonal factor") {
  const auto f = make_fock_diagonal_factor(12, 2, 0.3);
  REQUIRE(f.values.size() == 12);
  CHECK(f.values[0] == 1.0);
  // |L_n^(p)(x)| <= binom(n+p, n) e^(x/2), i.e. |d_n| <= e^(x/2).
  for (int p = 0; p <= 4; ++p)
    for (double alpha : {0.01, 0.5, 1.0, 2.0}) {
      const auto g = make_fock_diagonal_factor(60, p, alpha);
      for (double d : g.values) CHECK(std::abs(d) <= std::exp(alpha * alpha / 2.0) * (1 + 1e-12));
    }

  const auto device = make_fock_diagonal_factor(51, 3, 1e-3);
  for (int p = 0; p <= 4; ++p) {
    const auto g = make_fock_diagonal_factor(51, p, 1e-3);
    for (double d : g.values) CHECK(std::abs(d - 1.0) < 1e-4);
  }
  CHECK(device.values[50] < 1.0);
}

TEST_CASE("Fock diagonal operator") {
  const CompositeSpace s({3, 6}, {"opt1", "mech"});
  CHECK(test::max_abs_diff(fock_diagonal_1f1(s, "mech", 2, 0.0), identity(s)) == 0.0);

  const Operator f = fock_diagonal_1f1(CompositeSpace::single(4), "mech", 1, 0.1);
  CHECK(f.dense()(1, 1).real() == doctest::Approx(0.995).epsilon(1e-15));

  const Operator g = fock_diagonal_1f1(s, "mech", 3, 0.7);
  CHECK(test::max_abs(commutator(g, number_operator(s, "mech")).dense()) == 0.0);
  CHECK(g.hermiticity_error() == 0.0);
  CHECK_THROWS_AS(fock_diagonal_1f1(s, "nope", 1, 0.1), InvalidArgument);
}
