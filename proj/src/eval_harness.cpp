#include "maxlog/eval_harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "maxlog/errors.hpp"

namespace maxlog::eval {

namespace {

constexpr std::uint64_t kPairLabel = 0x7061697273ULL;

double uniform01(std::uint64_t word) noexcept { return static_cast<double>(word >> 11) * 0x1p-53; }

SketchConfig with_seed(SketchConfig config, HashSeed seed) {
  config.seed = seed;
  return config;
}

std::size_t intersection_size(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const auto mid = xs.size() / 2;
  return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  unsigned workers = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double ExperimentRecord::error_stddev() const noexcept {
  return std::sqrt(std::max(0.0, rmse * rmse - bias * bias));
}

ExperimentRecord rmse_experiment(const SketchConfig& method, const SetPairParams& params, const RunOptions& options) {
  if (options.runs == 0) throw ConfigError("runs must be at least 1");
  SetPairParams pair_params = params;
  pair_params.seed = SeedSequence::derive(options.master_seed, kPairLabel);
  const SetPair pair = generate_pair(pair_params);

  std::vector<double> estimates(options.runs);
  std::vector<std::size_t> bits(options.runs);
  parallel_for(options.runs, options.threads, [&](std::size_t r) {
    const SketchFactory factory(with_seed(method, SeedSequence::derive(options.master_seed, r)));
    const auto a = factory.from_items(pair.a);
    const auto b = factory.from_items(pair.b);
    estimates[r] = estimate(a, b).estimate;
    bits[r] = memory_bits(a);
  });

  ExperimentRecord rec;
  rec.method = std::string(to_string(method.algorithm));
  rec.k = method.k;
  rec.mode = params.mode;
  rec.n = params.n;
  rec.j_true = pair.exact_jaccard;
  rec.runs = options.runs;
  rec.memory_bits = bits.front();
  double sum = 0.0, sum_err = 0.0, sum_sq = 0.0;
  for (double e : estimates) {
    const double err = e - pair.exact_jaccard;
    sum += e;
    sum_err += err;
    sum_sq += err * err;
  }
  const double runs = static_cast<double>(options.runs);
  rec.mean_estimate = sum / runs;
  rec.bias = sum_err / runs;
  rec.rmse = std::sqrt(sum_sq / runs);
  return rec;
}

std::vector<ExperimentRecord> cardinality_sweep(const std::vector<SketchConfig>& methods, PairMode mode,
                                                double jaccard, const std::vector<std::uint64_t>& n_list,
                                                const RunOptions& options) {
  std::vector<ExperimentRecord> out;
  out.reserve(methods.size() * n_list.size());
  for (auto n : n_list) {
    for (const auto& m : methods) out.push_back(rmse_experiment(m, {mode, n, jaccard, {}}, options));
  }
  return out;
}

std::vector<SketchConfig> equal_memory_configs(std::size_t total_bits) {
  const std::size_t k = total_bits / 6;
  const std::size_t m = total_bits / 5;
  if (k == 0 || m < 16) throw ConfigError("equal-memory budget too small (need at least 80 bits)");
  return {SketchConfig{Algorithm::maxlog, k, 5, {}}, SketchConfig{Algorithm::hll, m, 5, {}}};
}

RetrievalResult association_experiment(const stream::FimiDataset& data, const SketchConfig& method, double j0,
                                       const RunOptions& options) {
  if (options.runs == 0) throw ConfigError("runs must be at least 1");
  std::map<std::uint64_t, std::vector<std::uint64_t>> record_sets;
  for (std::size_t r = 0; r < data.records.size(); ++r) {
    for (auto item : data.records[r]) record_sets[item].push_back(r + 1);
  }
  std::vector<const std::vector<std::uint64_t>*> sets;
  for (const auto& [_, s] : record_sets) sets.push_back(&s);
  const std::size_t items = sets.size();

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<char> truth;
  for (std::size_t i = 0; i < items; ++i) {
    for (std::size_t j = i + 1; j < items; ++j) {
      const auto common = intersection_size(*sets[i], *sets[j]);
      const double jac = static_cast<double>(common) / static_cast<double>(sets[i]->size() + sets[j]->size() - common);
      pairs.emplace_back(i, j);
      truth.push_back(jac > j0);
    }
  }
  const auto true_pairs = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), 1));

  struct RunOutcome {
    std::size_t predicted = 0;
    std::size_t hits = 0;
  };
  std::vector<RunOutcome> outcomes(options.runs);
  parallel_for(options.runs, options.threads, [&](std::size_t r) {
    const SketchFactory factory(with_seed(method, SeedSequence::derive(options.master_seed, r)));
    std::vector<AnySketch> sketches;
    sketches.reserve(items);
    for (const auto* s : sets) sketches.push_back(factory.from_items(*s));
    RunOutcome o;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (estimate(sketches[pairs[p].first], sketches[pairs[p].second]).estimate >= j0) {
        ++o.predicted;
        o.hits += truth[p] ? 1 : 0;
      }
    }
    outcomes[r] = o;
  });

  RetrievalResult res;
  res.threshold = j0;
  res.runs = options.runs;
  res.candidate_pairs = pairs.size();
  res.true_pairs = true_pairs;
  res.no_truth = true_pairs == 0;
  double predicted = 0.0, precision = 0.0, recall = 0.0;
  for (const auto& o : outcomes) {
    predicted += static_cast<double>(o.predicted);
    if (o.predicted == 0) {
      res.no_predictions = true;
      precision += 1.0;
    } else {
      precision += static_cast<double>(o.hits) / static_cast<double>(o.predicted);
    }
    recall += true_pairs == 0 ? 1.0 : static_cast<double>(o.hits) / static_cast<double>(true_pairs);
  }
  const double runs = static_cast<double>(options.runs);
  res.predicted_pairs = predicted / runs;
  res.precision = precision / runs;
  res.recall = recall / runs;
  return res;
}

stream::FimiDataset synthetic_association_dataset(std::size_t items, std::size_t records, HashSeed seed) {
  if (items < 4) throw ConfigError("synthetic dataset needs at least 4 items");
  constexpr double kGroupRate = 0.25;
  constexpr double kMaxDrop = 0.2;
  constexpr double kNoise = 0.01;
  const std::size_t groups = (items + 3) / 4;
  SeedSequence rng(seed);
  stream::FimiDataset data;
  for (std::size_t r = 0; r < records; ++r) {
    std::vector<std::uint64_t> record;
    for (std::size_t g = 0; g < groups; ++g) {
      const bool group_present = uniform01(rng.next()) < kGroupRate;
      const double drop = groups > 1 ? kMaxDrop * static_cast<double>(g) / static_cast<double>(groups - 1) : 0.0;
      for (std::size_t item = 4 * g; item < std::min(items, 4 * g + 4); ++item) {
        const double u = uniform01(rng.next());
        const bool present = group_present ? u >= drop : u < kNoise;
        if (present) record.push_back(item + 1);
      }
    }
    if (!record.empty()) data.records.push_back(std::move(record));
  }
  return data;
}

TimingResult timing_experiment(const SketchConfig& method, std::uint64_t n, std::size_t repeats) {
  using clock = std::chrono::steady_clock;
  if (repeats == 0) throw ConfigError("repeats must be at least 1");
  const SketchFactory factory(method);
  std::vector<double> update_ns, estimate_ns;
  volatile double sink = 0.0;
  for (std::size_t round = 0; round <= repeats; ++round) {
    const auto pair = generate_pair({PairMode::balanced, n, 0.9, SeedSequence::derive(method.seed, round)});
    auto a = factory.make();
    auto b = factory.make();
    const auto t0 = clock::now();
    for (auto v : pair.a) update(a, v);
    for (auto v : pair.b) update(b, v);
    const auto t1 = clock::now();

    std::size_t reps = 0;
    const auto e0 = clock::now();
    auto e1 = e0;
    while (reps < 16 || e1 - e0 < std::chrono::milliseconds(2)) {
      sink = sink + estimate(a, b).estimate;
      ++reps;
      e1 = clock::now();
    }
    if (round == 0) continue;  // warmup
    update_ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() /
                        static_cast<double>(pair.a.size() + pair.b.size()));
    estimate_ns.push_back(std::chrono::duration<double, std::nano>(e1 - e0).count() / static_cast<double>(reps));
  }
  TimingResult res;
  res.update_ns = median(update_ns);
  res.estimate_ns = median(estimate_ns);
  res.update_ops_per_sec = res.update_ns > 0 ? 1e9 / res.update_ns : 0.0;
  res.estimate_ops_per_sec = res.estimate_ns > 0 ? 1e9 / res.estimate_ns : 0.0;
  return res;
}

void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.method << ',' << r.k << ',' << to_string(r.mode) << ',' << r.n << ',' << format_real(r.j_true) << ','
        << r.runs << ',' << format_real(r.bias) << ',' << format_real(r.rmse) << ','
        << format_real(r.mean_estimate) << ',' << r.memory_bits << ',' << format_real(r.update_ns) << ','
        << format_real(r.estimate_ns) << '\n';
  }
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_csv(records, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace maxlog::eval
