#pragma once

#include <algorithm>
#include <cstddef>

namespace maxlog {

/// Result of comparing two sketches.
///
/// `raw` is the unclamped estimator output; `estimate` is `raw` clamped to
/// [0, 1]. `k_hat` is the estimator's sufficient statistic: the number of
/// registers with a unique-maximum disagreement for MaxLog sketches, the
/// number of matching minima for MinHash, 0 for HyperLogLog.
/// `registers_used` is the number of register pairs that entered the
/// statistic; it is below the sketch size only for one-permutation sketches
/// with empty buckets.
struct JaccardEstimate {
  double estimate = 0.0;
  double raw = 0.0;
  std::size_t k_hat = 0;
  std::size_t registers_used = 0;
  double variance_hint = 0.0;

  static double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }
};

}  // namespace maxlog
