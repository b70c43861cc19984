#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "maxlog/set_pairs.hpp"
#include "maxlog/sketch_variant.hpp"
#include "maxlog/stream_io.hpp"

namespace maxlog::eval {

struct RunOptions {
  std::size_t runs = 1000;
  HashSeed master_seed{};
  /// 0 means all available cores.
  unsigned threads = 0;
};

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

struct ExperimentRecord {
  std::string method;
  std::size_t k = 0;
  PairMode mode = PairMode::balanced;
  std::uint64_t n = 0;
  double j_true = 0.0;
  std::size_t runs = 0;
  double bias = 0.0;
  double rmse = 0.0;
  double mean_estimate = 0.0;
  std::size_t memory_bits = 0;
  double update_ns = 0.0;
  double estimate_ns = 0.0;

  /// sqrt(rmse^2 - bias^2).
  double error_stddev() const noexcept;
};

/// Monte-Carlo bias and RMSE of one method on one synthetic pair. The pair
/// is generated once from the master seed; run r hashes with
/// SeedSequence::derive(master, r). The config's own seed is ignored.
/// Timing columns are left at 0 so output is byte-reproducible.
ExperimentRecord rmse_experiment(const SketchConfig& method, const SetPairParams& params, const RunOptions& options);

/// One record per (method, n), methods in the given order for each n.
std::vector<ExperimentRecord> cardinality_sweep(const std::vector<SketchConfig>& methods, PairMode mode,
                                                double jaccard, const std::vector<std::uint64_t>& n_list,
                                                const RunOptions& options);

/// MaxLogHash (5-bit rank + indicator, k = bits / 6) and HyperLogLog
/// (5-bit registers, m = bits / 5) sized to the same total memory.
std::vector<SketchConfig> equal_memory_configs(std::size_t total_bits);

struct RetrievalResult {
  double threshold = 0.0;
  std::size_t runs = 0;
  std::size_t candidate_pairs = 0;
  std::size_t true_pairs = 0;
  double predicted_pairs = 0.0;  // mean over runs
  double precision = 0.0;        // mean over runs
  double recall = 0.0;           // mean over runs
  /// Some run predicted no pairs; its precision counted as 1.
  bool no_predictions = false;
  /// No pair exceeds the threshold; recall reported as 1.
  bool no_truth = false;
};

/// All-pairs retrieval of item record-sets with similarity > J0, scored
/// against exact Jaccard over the materialized record-sets.
RetrievalResult association_experiment(const stream::FimiDataset& data, const SketchConfig& method, double j0,
                                       const RunOptions& options);

/// Transactions with planted co-occurrence: items come in groups of four
/// that appear together, each member dropping out of a group record with
/// a per-group probability, so in-group similarities spread over roughly
/// [0.6, 1] while cross-group similarities stay low.
stream::FimiDataset synthetic_association_dataset(std::size_t items, std::size_t records, HashSeed seed);

struct TimingResult {
  double update_ns = 0.0;    // median per item
  double estimate_ns = 0.0;  // median per estimate
  double update_ops_per_sec = 0.0;
  double estimate_ops_per_sec = 0.0;
};

/// Median per-op wall time over `repeats` timed rounds after one warmup
/// round. Each round builds two sketches over n items and times repeated
/// estimates between them.
TimingResult timing_experiment(const SketchConfig& method, std::uint64_t n, std::size_t repeats);

inline constexpr const char* kCsvHeader =
    "method,k,mode,n,j_true,runs,bias,rmse,mean_estimate,memory_bits,update_ns,estimate_ns";

/// Header row plus one row per record; reals with 9 significant digits.
void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& out);
void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path);

}  // namespace maxlog::eval
