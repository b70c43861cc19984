#include <doctest.h>

#include <cmath>

#include "maxlog/errors.hpp"
#include "maxlog/estimation.hpp"

using namespace maxlog;
using namespace maxlog::analysis;

namespace {

// Direct partial sums to convergence in long double; independent of the
// library's truncation rule.
long double alpha_reference(std::uint64_t n) {
  long double sum = 0.0L;
  for (int j = 1; j < 200; ++j) {
    const long double q = 1.0L - std::ldexp(1.0L, -j);
    sum += std::ldexp(1.0L, -(j + 1)) * std::pow(q, static_cast<long double>(n - 1));
  }
  return static_cast<long double>(n) * sum;
}

}  // namespace

TEST_CASE("alpha_n small values") {
  CHECK(alpha_n(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(alpha_n(3) == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
  CHECK(std::abs(alpha_n(2) - 2.0 / 3.0) < 1e-10);
  CHECK(std::abs(alpha_n(3) - 5.0 / 7.0) < 1e-10);
  CHECK(std::abs(alpha_n(2) - 0.7213) == doctest::Approx(0.0546).epsilon(1e-2));
  CHECK_THROWS_AS(alpha_n(1), DomainError);
  CHECK_THROWS_AS(alpha_n(0), DomainError);
}

TEST_CASE("alpha_n agrees with a long-double reference") {
  for (std::uint64_t n : {2ULL, 3ULL, 7ULL, 50ULL, 1000ULL, 123456ULL, 1'000'000ULL}) {
    CAPTURE(n);
    CHECK(std::abs(alpha_n(n) - static_cast<double>(alpha_reference(n))) < 1e-10);
  }
}

TEST_CASE("alpha_n bounds on a log grid") {
  // The 0.007 bound is quoted to three decimals; alpha_3 = 5/7 sits 0.0070143 away.
  const auto gap_3dp = [](double a) { return std::round(std::abs(a - 0.7213) * 1000.0) / 1000.0; };
  CHECK(gap_3dp(alpha_n(3)) <= 0.007);
  CHECK(std::abs(alpha_n(3) - 0.7213) == doctest::Approx(0.7213 - 5.0 / 7.0).epsilon(1e-9));
  for (double x = 4; x <= 1e6; x *= 1.3) {
    const auto n = static_cast<std::uint64_t>(x);
    CAPTURE(n);
    CHECK(std::abs(alpha_n(n) - 0.7213) <= 0.007);
    CHECK(alpha_n(n) > 0.66);
    CHECK(alpha_n(n) < 0.73);
  }
  CHECK(std::abs(alpha_n(1'000'000) - 0.7213) <= 0.007);
  CHECK(std::isfinite(alpha_n(1'000'000'000ULL)));
  CHECK(std::abs(alpha_n(1'000'000'000ULL) - 0.7213) <= 0.007);
}

TEST_CASE("closed form matches the series on 2..50") {
  CHECK(alpha_n_closed_form(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(alpha_n_closed_form(3) == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
  for (std::uint64_t n = 2; n <= 50; ++n) {
    CAPTURE(n);
    CHECK(std::abs(alpha_n_closed_form(n) - alpha_n(n)) < 1e-8);
  }
  CHECK_THROWS_AS(alpha_n_closed_form(1), DomainError);
  CHECK_THROWS_AS(alpha_n_closed_form(51), DomainError);
}

TEST_CASE("unique-maximum disagreement probability") {
  CHECK(delta_probability(1, 0.3) == 0.0);
  CHECK(delta_probability(2, 0.0) == doctest::Approx(2.0 / 3.0));
  CHECK(delta_probability(5, 0.9) == doctest::Approx(alpha_n(5) * 0.1));
  CHECK_THROWS_AS(delta_probability(5, 1.5), DomainError);
}

TEST_CASE("expected bias") {
  CHECK(expected_bias(10, 1.0) == 0.0);
  CHECK(expected_bias(2, 0.8) == doctest::Approx((1 - (2.0 / 3.0) / 0.7213) * 0.2));
  CHECK(expected_bias(2, 0.8) == doctest::Approx(0.01514).epsilon(1e-3));
  CHECK(std::abs(expected_bias(1000, 0.9)) <= 0.001);
  for (std::uint64_t n : {3ULL, 10ULL, 100ULL, 100000ULL}) CHECK(std::abs(expected_bias(n, 0.5)) <= 0.01 * 0.5);
  CHECK_THROWS_AS(expected_bias(1, 0.5), DomainError);
}

TEST_CASE("variance forms") {
  CHECK(variance(100, 1.0, 128) == 0.0);
  CHECK(approx_variance(1.0, 128) == 0.0);
  CHECK(approx_variance(0.9, 128) == doctest::Approx(0.1 * 1.2864 / 128));
  CHECK(std::sqrt(approx_variance(0.9, 128)) == doctest::Approx(0.0317).epsilon(2e-3));
  CHECK(std::abs(variance(10'000, 0.9, 128) / approx_variance(0.9, 128) - 1.0) < 0.01);
  for (std::uint64_t n : {2ULL, 5ULL, 1000ULL}) {
    for (double j : {0.0, 0.3, 0.9}) {
      double previous = variance(n, j, 1);
      CHECK(previous >= 0.0);
      for (std::size_t k = 2; k <= 1024; k *= 2) {
        const double v = variance(n, j, k);
        CHECK(v >= 0.0);
        CHECK(v < previous);
        previous = v;
      }
    }
  }
  CHECK_THROWS_AS(approx_variance(0.5, 0), DomainError);
}

TEST_CASE("required_k sizing") {
  CHECK(required_k(0.9, 0.01) == 1287);
  CHECK(required_k(0.99, 0.01) == 138);
  CHECK(required_k(0.5, 1.0) == 1);
  CHECK(required_k(0.5, 10.0) == 1);
  CHECK(required_k(1.0, 0.01) == 1);
  for (double j : {0.2, 0.8, 0.95}) {
    const auto k = required_k(j, 0.02);
    CHECK(approx_variance(j, k) <= 0.02 * 0.02);
    if (k > 1) CHECK(approx_variance(j, k - 1) > 0.02 * 0.02);
  }
  CHECK_THROWS_AS(required_k(0.5, 0.0), DomainError);
}

TEST_CASE("MinHash variance") {
  CHECK(minhash_variance(0.0, 10) == 0.0);
  CHECK(minhash_variance(1.0, 10) == 0.0);
  CHECK(minhash_variance(0.9, 128) == doctest::Approx(0.09 / 128));
  CHECK(minhash_variance(0.5, 100) == doctest::Approx(0.0025));
}

TEST_CASE("accuracy model bundles the pieces") {
  const auto m = AccuracyModel::make(10'000, 0.9, 128);
  CHECK(m.alpha_n == doctest::Approx(alpha_n(10'000)));
  CHECK(m.beta_n == doctest::Approx(alpha_n(10'000) / 0.7213));
  CHECK(m.variance == doctest::Approx(variance(10'000, 0.9, 128)));
  CHECK(m.approx_variance == doctest::Approx(approx_variance(0.9, 128)));
}
