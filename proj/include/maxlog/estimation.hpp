#pragma once

#include <cstddef>
#include <cstdint>

namespace maxlog::analysis {

/// alpha: the estimator constant (the limit region of alpha_n).
inline constexpr double kAlpha = 0.7213;
/// 1/alpha - 1, rounded as in the approximate variance formula.
inline constexpr double kVarianceOffset = 0.3864;

/// alpha_n = n * sum_{j>=1} 2^-(j+1) (1 - 2^-j)^(n-1): the probability that
/// one fixed register of a pair with union size n and J = 0 shows a unique
/// maximum disagreement. Truncated once the tail bound n 2^-(j+1) drops
/// below 1e-12. Throws DomainError for n < 2.
double alpha_n(std::uint64_t n);

/// Alternating binomial form of alpha_n; only for 2 <= n <= 50, where
/// extended precision still absorbs the cancellation.
double alpha_n_closed_form(std::uint64_t n);

/// alpha_n / alpha.
double beta_n(std::uint64_t n);

/// P(delta[i] = 1) for union size n and similarity J; 0 when n == 1.
double delta_probability(std::uint64_t n, double jaccard);

/// E[J_hat] - J = (1 - beta_n)(1 - J).
double expected_bias(std::uint64_t n, double jaccard);

/// Exact variance beta_n (1-J) (1/alpha - beta_n (1-J)) / k.
double variance(std::uint64_t n, double jaccard, std::size_t k);

/// (1-J)(J + 0.3864) / k, the beta = 1 approximation.
double approx_variance(double jaccard, std::size_t k);

/// Smallest k with approx_variance(J, k) <= rmse^2; 1 when J == 1.
std::size_t required_k(double jaccard, double rmse_target);

/// J(1-J)/k.
double minhash_variance(double jaccard, std::size_t k);

/// Snapshot of the accuracy model for one configuration.
struct AccuracyModel {
  std::uint64_t n = 2;
  double jaccard = 0.0;
  std::size_t k = 1;
  double alpha_n = 0.0;
  double beta_n = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double approx_variance = 0.0;

  static AccuracyModel make(std::uint64_t n, double jaccard, std::size_t k);
};

}  // namespace maxlog::analysis
