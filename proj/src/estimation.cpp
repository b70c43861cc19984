#include "maxlog/estimation.hpp"

#include <cmath>
#include <string>

#include "maxlog/errors.hpp"

namespace maxlog::analysis {

namespace {

void require_union(std::uint64_t n) {
  if (n < 2) throw DomainError("alpha_n is defined for union size n >= 2, got " + std::to_string(n));
}

void require_jaccard(double j) {
  if (!(j >= 0.0 && j <= 1.0)) throw DomainError("Jaccard similarity must lie in [0, 1]");
}

void require_k(std::size_t k) {
  if (k < 1) throw DomainError("register count k must be at least 1");
}

}  // namespace

double alpha_n(std::uint64_t n) {
  require_union(n);
  const double nd = static_cast<double>(n);
  double sum = 0.0;
  for (int j = 1; j < 1100; ++j) {
    const double half_pow = std::ldexp(1.0, -j);
    const double term = 0.5 * half_pow * std::exp((nd - 1.0) * std::log1p(-half_pow));
    sum += term;
    if (nd * 0.5 * half_pow < 1e-12) break;
  }
  return nd * sum;
}

double alpha_n_closed_form(std::uint64_t n) {
  if (n < 2 || n > 50) throw DomainError("closed-form alpha_n is limited to 2 <= n <= 50");
  long double sum = 0.0L;
  long double binom = 1.0L;  // C(n-1, l)
  for (std::uint64_t l = 0; l < n; ++l) {
    const std::uint64_t power = n - l;
    const long double denom = std::ldexp(1.0L, static_cast<int>(power)) - 1.0L;
    const long double term = binom / denom;
    sum += ((n - l - 1) % 2 == 0) ? term : -term;
    binom = binom * static_cast<long double>(n - 1 - l) / static_cast<long double>(l + 1);
  }
  return static_cast<double>(static_cast<long double>(n) / 2.0L * sum);
}

double beta_n(std::uint64_t n) { return alpha_n(n) / kAlpha; }

double delta_probability(std::uint64_t n, double jaccard) {
  require_jaccard(jaccard);
  if (n == 0) throw DomainError("union size must be at least 1");
  if (n == 1) return 0.0;
  return alpha_n(n) * (1.0 - jaccard);
}

double expected_bias(std::uint64_t n, double jaccard) {
  require_union(n);
  require_jaccard(jaccard);
  return (1.0 - beta_n(n)) * (1.0 - jaccard);
}

double variance(std::uint64_t n, double jaccard, std::size_t k) {
  require_union(n);
  require_jaccard(jaccard);
  require_k(k);
  const double b = beta_n(n);
  const double miss = b * (1.0 - jaccard);
  return miss * (1.0 / kAlpha - miss) / static_cast<double>(k);
}

double approx_variance(double jaccard, std::size_t k) {
  require_jaccard(jaccard);
  require_k(k);
  return (1.0 - jaccard) * (jaccard + kVarianceOffset) / static_cast<double>(k);
}

std::size_t required_k(double jaccard, double rmse_target) {
  require_jaccard(jaccard);
  if (!(rmse_target > 0.0)) throw DomainError("target RMSE must be positive");
  if (jaccard == 1.0) return 1;
  const double needed = (1.0 - jaccard) * (jaccard + kVarianceOffset) / (rmse_target * rmse_target);
  const double k = std::ceil(needed);
  return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

double minhash_variance(double jaccard, std::size_t k) {
  require_jaccard(jaccard);
  require_k(k);
  return jaccard * (1.0 - jaccard) / static_cast<double>(k);
}

AccuracyModel AccuracyModel::make(std::uint64_t n, double jaccard, std::size_t k) {
  AccuracyModel m;
  m.n = n;
  m.jaccard = jaccard;
  m.k = k;
  m.alpha_n = analysis::alpha_n(n);
  m.beta_n = m.alpha_n / kAlpha;
  m.bias = expected_bias(n, jaccard);
  m.variance = analysis::variance(n, jaccard, k);
  m.approx_variance = analysis::approx_variance(jaccard, k);
  return m;
}

}  // namespace maxlog::analysis
