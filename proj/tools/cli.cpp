#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "maxlog/errors.hpp"
#include "maxlog/estimation.hpp"
#include "maxlog/eval_harness.hpp"
#include "maxlog/set_pairs.hpp"
#include "maxlog/sketch_store.hpp"
#include "maxlog/stream_io.hpp"

namespace maxlog::cli {

namespace {

const std::vector<std::string> kAlgorithms{"maxlog", "oph", "minhash", "hll"};
const std::vector<std::string> kModes{"balanced", "unbalanced"};

PairMode mode_of(const std::string& name) { return *parse_pair_mode(name); }

std::string real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

struct SketchFlags {
  std::string algo = "maxlog";
  std::size_t k = 128;
  unsigned width = kDefaultRankWidth;
  std::uint64_t seed = 42;

  Algorithm algorithm() const { return *parse_algorithm(algo); }
  SketchConfig config() const { return {algorithm(), k, width, HashSeed{seed}}; }
};

void add_sketch_flags(CLI::App& cmd, SketchFlags& f, bool with_algo = true) {
  if (with_algo) {
    cmd.add_option("--algo", f.algo, "Sketch algorithm")->check(CLI::IsMember(kAlgorithms))->capture_default_str();
  }
  cmd.add_option("--k", f.k, "Registers per sketch (HLL: register count m)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 31))
      ->capture_default_str();
  cmd.add_option("--width", f.width, "Rank bits per register, 1..7")->check(CLI::Range(1U, 7U))->capture_default_str();
  cmd.add_option("--seed", f.seed, "Master hash seed")->capture_default_str();
}

void add_config_flag(CLI::App& cmd) {
  // Expanded by expand_config() before parsing; registered so help lists it.
  cmd.add_option("--config", "File of key=value lines setting flags not given on the command line")
      ->type_name("FILE");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Replaces `--config FILE` with the file's key=value pairs as flags. Flags
// already on the command line win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ConfigError("--config: cannot open '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--config: " + path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto key = trim(text.substr(0, eq));
    if (key.rfind("--", 0) != 0) key = "--" + key;
    if (has_flag(args, key) || has_flag(extra, key)) continue;
    extra.push_back(key);
    extra.push_back(trim(text.substr(eq + 1)));
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

struct InputFlags {
  std::string path;
  std::string format = "tsv";
  std::string dedup = "bloom";
  double fp_rate = 1e-6;
  std::string on_error = "fail";
};

void add_input_flags(CLI::App& cmd, InputFlags& f, bool required) {
  auto* input = cmd.add_option("--input", f.path, "Event file (TSV user<TAB>item, or FIMI transactions)");
  if (required) input->required();
  input->check(CLI::ExistingFile);
  cmd.add_option("--format", f.format, "Input format")->check(CLI::IsMember({"tsv", "fimi"}))->capture_default_str();
  cmd.add_option("--dedup", f.dedup, "Duplicate pair filter")
      ->check(CLI::IsMember({"bloom", "exact", "none"}))
      ->capture_default_str();
  cmd.add_option("--fp-rate", f.fp_rate, "Bloom filter false-positive target")
      ->check(CLI::Range(1e-12, 0.5))
      ->capture_default_str();
  cmd.add_option("--on-error", f.on_error, "Malformed TSV lines: fail or skip")
      ->check(CLI::IsMember({"fail", "skip"}))
      ->capture_default_str();
}

struct LoadedEvents {
  std::vector<stream::UserItemEvent> events;
  std::size_t skipped = 0;
  std::size_t dropped = 0;
};

LoadedEvents load_events(const InputFlags& f, std::ostream& err) {
  std::ifstream in(f.path);
  if (!in) throw std::runtime_error("cannot open '" + f.path + "'");
  LoadedEvents loaded;
  if (f.format == "fimi") {
    loaded.events = stream::fimi_to_stream(in).events;
  } else {
    auto parsed = stream::parse_tsv(in, f.on_error == "skip" ? stream::OnError::skip : stream::OnError::fail_fast);
    for (const auto& issue : parsed.issues) err << "skipped " << f.path << ":" << issue.line << ": " << issue.message << '\n';
    loaded.skipped = parsed.issues.size();
    loaded.events = std::move(parsed.events);
  }
  if (f.dedup != "none") {
    auto filter = f.dedup == "exact" ? stream::DedupFilter::exact()
                                     : stream::DedupFilter::bloom(loaded.events.size(), f.fp_rate);
    auto result = stream::dedup(loaded.events, filter);
    loaded.events = std::move(result.events);
    loaded.dropped = result.dropped;
  }
  return loaded;
}

struct RunFlags {
  std::size_t runs = 1000;
  unsigned threads = 0;
  std::string output;
};

void add_run_flags(CLI::App& cmd, RunFlags& f) {
  cmd.add_option("--runs", f.runs, "Independent Monte-Carlo runs")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 32))
      ->capture_default_str();
  cmd.add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd.add_option("--output", f.output, "Write CSV here instead of standard output");
}

void emit_records(const std::vector<eval::ExperimentRecord>& records, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    eval::write_csv(records, out);
  } else {
    eval::emit_csv(records, path);
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& flag, const std::string& text) {
  std::vector<std::uint64_t> values;
  for (const auto& part : split_list(text)) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || v == 0) throw ConfigError(flag + ": '" + part + "' is not a positive integer");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError(flag + ": empty list");
  return values;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jaccard similarity sketches for user-item streams", "maxloghash"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // ingest
  SketchFlags ingest_sketch;
  InputFlags ingest_input;
  std::string ingest_snapshot;
  auto* ingest = app.add_subcommand("ingest", "Build per-user sketches from an event file and save a snapshot");
  add_input_flags(*ingest, ingest_input, true);
  add_sketch_flags(*ingest, ingest_sketch);
  ingest->add_option("--snapshot", ingest_snapshot, "Snapshot file to write")->required();
  add_config_flag(*ingest);

  // estimate
  SketchFlags est_sketch;
  InputFlags est_input;
  std::string est_snapshot, user1, user2;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate the Jaccard similarity of two users");
  auto* est_snap_opt = estimate_cmd->add_option("--snapshot", est_snapshot, "Snapshot written by ingest")
                           ->check(CLI::ExistingFile);
  add_input_flags(*estimate_cmd, est_input, false);
  add_sketch_flags(*estimate_cmd, est_sketch);
  estimate_cmd->add_option("--user1", user1, "First user")->required();
  estimate_cmd->add_option("--user2", user2, "Second user")->required();
  add_config_flag(*estimate_cmd);
  est_snap_opt->excludes(estimate_cmd->get_option("--input"));

  // gen-pair
  SetPairParams pair_params;
  std::string pair_mode_name = "balanced";
  std::uint64_t pair_seed = 42;
  std::string pair_output;
  auto* gen_pair = app.add_subcommand("gen-pair", "Write a synthetic set pair as TSV events for users A and B");
  gen_pair->add_option("--mode", pair_mode_name, "Pair construction")->check(CLI::IsMember(kModes))->capture_default_str();
  gen_pair->add_option("--n", pair_params.n, "Cardinality |A|")->check(CLI::PositiveNumber)->capture_default_str();
  gen_pair->add_option("--j", pair_params.jaccard, "Target Jaccard similarity")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_pair->add_option("--seed", pair_seed, "Generator seed")->capture_default_str();
  gen_pair->add_option("--output", pair_output, "Write TSV here instead of standard output");
  add_config_flag(*gen_pair);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Closed-form accuracy analysis");
  analyze->require_subcommand(1);
  std::uint64_t alpha_n = 2;
  auto* alpha_cmd = analyze->add_subcommand("alpha", "alpha_n and beta_n for a union size");
  alpha_cmd->add_option("--n", alpha_n, "Union size n")->required()->check(CLI::PositiveNumber);
  double sizing_j = 0.9, sizing_rmse = 0.01;
  auto* sizing_cmd = analyze->add_subcommand("sizing", "Registers needed for a target RMSE");
  sizing_cmd->add_option("--j", sizing_j, "Similarity of interest")->required()->check(CLI::Range(0.0, 1.0));
  sizing_cmd->add_option("--rmse", sizing_rmse, "Target RMSE")->required()->check(CLI::PositiveNumber);
  std::uint64_t theory_n = 10000;
  double theory_j = 0.9;
  std::size_t theory_k = 128;
  auto* theory_cmd = analyze->add_subcommand("theory", "Bias and variance model for (n, J, k)");
  theory_cmd->add_option("--n", theory_n, "Union size n")->required()->check(CLI::Range(std::uint64_t{2}, ~std::uint64_t{0}));
  theory_cmd->add_option("--j", theory_j, "Jaccard similarity")->required()->check(CLI::Range(0.0, 1.0));
  theory_cmd->add_option("--k", theory_k, "Registers")->required()->check(CLI::PositiveNumber);

  // bench-rmse
  SketchFlags rmse_sketch;
  RunFlags rmse_run;
  SetPairParams rmse_pair;
  std::string rmse_pair_mode = "balanced";
  auto* bench_rmse = app.add_subcommand("bench-rmse", "Bias and RMSE of one method on one synthetic pair");
  add_sketch_flags(*bench_rmse, rmse_sketch);
  bench_rmse->add_option("--mode", rmse_pair_mode, "Pair construction")->check(CLI::IsMember(kModes))->capture_default_str();
  bench_rmse->add_option("--n", rmse_pair.n, "Cardinality |A|")->check(CLI::PositiveNumber)->capture_default_str();
  bench_rmse->add_option("--j", rmse_pair.jaccard, "Target Jaccard similarity")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  add_run_flags(*bench_rmse, rmse_run);
  add_config_flag(*bench_rmse);

  // bench-sweep
  SketchFlags sweep_sketch;
  RunFlags sweep_run;
  std::string sweep_algos = "maxlog,oph";
  std::string sweep_ns = "50,100,200,500,1000,2000,5000,10000";
  std::string sweep_mode = "balanced";
  double sweep_j = 0.9;
  std::size_t equal_memory = 0;
  auto* bench_sweep = app.add_subcommand("bench-sweep", "RMSE across cardinalities for several methods");
  add_sketch_flags(*bench_sweep, sweep_sketch, false);
  bench_sweep->add_option("--algos", sweep_algos, "Comma-separated methods")->capture_default_str();
  bench_sweep->add_option("--n-list", sweep_ns, "Comma-separated cardinalities")->capture_default_str();
  bench_sweep->add_option("--mode", sweep_mode, "Pair construction")->check(CLI::IsMember(kModes))->capture_default_str();
  bench_sweep->add_option("--j", sweep_j, "Target Jaccard similarity")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bench_sweep->add_option("--equal-memory", equal_memory,
                          "Compare MaxLogHash and HyperLogLog at this many total bits (overrides --algos, --k, --width)");
  add_run_flags(*bench_sweep, sweep_run);
  add_config_flag(*bench_sweep);

  // bench-assoc
  SketchFlags assoc_sketch;
  RunFlags assoc_run;
  std::string assoc_input;
  double assoc_j0 = 0.8;
  std::size_t synth_items = 120, synth_records = 4000;
  auto* bench_assoc = app.add_subcommand("bench-assoc", "Precision and recall of all-pairs similar-item retrieval");
  add_sketch_flags(*bench_assoc, assoc_sketch);
  bench_assoc->add_option("--input", assoc_input, "FIMI transaction file (default: synthetic dataset)")
      ->check(CLI::ExistingFile);
  bench_assoc->add_option("--j0", assoc_j0, "Similarity threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bench_assoc->add_option("--synthetic-items", synth_items, "Items in the synthetic dataset")->capture_default_str();
  bench_assoc->add_option("--synthetic-records", synth_records, "Records in the synthetic dataset")
      ->capture_default_str();
  add_run_flags(*bench_assoc, assoc_run);
  add_config_flag(*bench_assoc);

  // bench-time
  SketchFlags time_sketch;
  std::string time_ks = "64,128,256,512,1024,2048,4096";
  std::uint64_t time_n = 10000;
  std::size_t time_repeats = 5;
  auto* bench_time = app.add_subcommand("bench-time", "Median update and estimate time per operation");
  add_sketch_flags(*bench_time, time_sketch);
  bench_time->add_option("--k-list", time_ks, "Comma-separated register counts")->capture_default_str();
  bench_time->add_option("--n", time_n, "Items per sketch")->check(CLI::PositiveNumber)->capture_default_str();
  bench_time->add_option("--repeats", time_repeats, "Timed rounds")->check(CLI::PositiveNumber)->capture_default_str();
  add_config_flag(*bench_time);

  if (!args.empty() && args[0].rfind("-", 0) != 0 && app.get_subcommand_no_throw(args[0]) == nullptr) {
    err << "error: unknown subcommand '" << args[0] << "'\n\n" << app.help();
    return kUsageError;
  }
  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CLI::App* context = &app;
    while (!context->get_subcommands().empty()) context = context->get_subcommands().back();
    out << context->help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    CLI::App* context = &app;
    while (!context->get_subcommands().empty()) context = context->get_subcommands().back();
    err << "error: " << e.what() << "\n\n" << context->help();
    return kUsageError;
  }

  try {
    if (ingest->parsed()) {
      const auto loaded = load_events(ingest_input, err);
      SketchStore store(ingest_sketch.config());
      store.ingest(loaded.events);
      store.save(std::filesystem::path(ingest_snapshot));
      out << "algorithm,k,width,seed,events,users,dropped_duplicates,skipped_lines\n"
          << to_string(store.config().algorithm) << ',' << store.config().k << ',' << store.config().width << ','
          << store.config().seed.value << ',' << store.events_applied() << ',' << store.size() << ','
          << loaded.dropped << ',' << loaded.skipped << '\n';
    } else if (estimate_cmd->parsed()) {
      std::optional<SketchStore> store;
      if (!est_snapshot.empty()) {
        store.emplace(SketchStore::load(std::filesystem::path(est_snapshot)));
      } else if (!est_input.path.empty()) {
        store.emplace(est_sketch.config());
        store->ingest(load_events(est_input, err).events);
      } else {
        err << "error: estimate needs --snapshot or --input\n\n" << estimate_cmd->help();
        return kUsageError;
      }
      const auto e = store->estimate(user1, user2);
      out << "user1,user2,estimate,raw,k_hat,registers_used,variance_hint\n"
          << user1 << ',' << user2 << ',' << real(e.estimate) << ',' << real(e.raw) << ',' << e.k_hat << ','
          << e.registers_used << ',' << real(e.variance_hint) << '\n';
    } else if (gen_pair->parsed()) {
      pair_params.seed = HashSeed{pair_seed};
      pair_params.mode = mode_of(pair_mode_name);
      const auto pair = generate_pair(pair_params);
      std::ofstream file;
      if (!pair_output.empty()) {
        file.open(pair_output, std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open '" + pair_output + "' for writing");
      }
      std::ostream& sink = pair_output.empty() ? out : file;
      for (auto v : pair.a) sink << "A\t" << v << '\n';
      for (auto v : pair.b) sink << "B\t" << v << '\n';
      err << "|A|=" << pair.a.size() << " |B|=" << pair.b.size() << " intersection=" << pair.intersection
          << " union=" << pair.union_size << " exact_jaccard=" << real(pair.exact_jaccard) << '\n';
    } else if (analyze->parsed()) {
      if (alpha_cmd->parsed()) {
        out << "n,alpha_n,beta_n\n"
            << alpha_n << ',' << real(analysis::alpha_n(alpha_n)) << ',' << real(analysis::beta_n(alpha_n)) << '\n';
      } else if (sizing_cmd->parsed()) {
        out << "j,rmse,required_k\n"
            << real(sizing_j) << ',' << real(sizing_rmse) << ',' << analysis::required_k(sizing_j, sizing_rmse) << '\n';
      } else {
        const auto m = analysis::AccuracyModel::make(theory_n, theory_j, theory_k);
        out << "n,j,k,alpha_n,beta_n,bias,variance,approx_variance,rmse,minhash_rmse\n"
            << m.n << ',' << real(m.jaccard) << ',' << m.k << ',' << real(m.alpha_n) << ',' << real(m.beta_n) << ','
            << real(m.bias) << ',' << real(m.variance) << ',' << real(m.approx_variance) << ','
            << real(std::sqrt(m.variance + m.bias * m.bias)) << ','
            << real(std::sqrt(analysis::minhash_variance(theory_j, theory_k))) << '\n';
      }
    } else if (bench_rmse->parsed()) {
      rmse_pair.mode = mode_of(rmse_pair_mode);
      const eval::RunOptions opts{rmse_run.runs, HashSeed{rmse_sketch.seed}, rmse_run.threads};
      emit_records({eval::rmse_experiment(rmse_sketch.config(), rmse_pair, opts)}, rmse_run.output, out);
    } else if (bench_sweep->parsed()) {
      std::vector<SketchConfig> methods;
      if (equal_memory > 0) {
        methods = eval::equal_memory_configs(equal_memory);
      } else {
        for (const auto& name : split_list(sweep_algos)) {
          const auto algo = parse_algorithm(name);
          if (!algo) throw ConfigError("--algos: unknown method '" + name + "'");
          methods.push_back({*algo, sweep_sketch.k, sweep_sketch.width, {}});
        }
      }
      const eval::RunOptions opts{sweep_run.runs, HashSeed{sweep_sketch.seed}, sweep_run.threads};
      emit_records(eval::cardinality_sweep(methods, mode_of(sweep_mode), sweep_j, parse_u64_list("--n-list", sweep_ns), opts),
                   sweep_run.output, out);
    } else if (bench_assoc->parsed()) {
      stream::FimiDataset data;
      if (assoc_input.empty()) {
        data = eval::synthetic_association_dataset(synth_items, synth_records, HashSeed{assoc_sketch.seed});
      } else {
        std::ifstream in(assoc_input);
        if (!in) throw std::runtime_error("cannot open '" + assoc_input + "'");
        data = stream::parse_fimi(in);
      }
      const eval::RunOptions opts{assoc_run.runs, HashSeed{assoc_sketch.seed}, assoc_run.threads};
      const auto r = eval::association_experiment(data, assoc_sketch.config(), assoc_j0, opts);
      std::ostringstream csv;
      csv << "method,k,j0,runs,candidate_pairs,true_pairs,predicted_pairs,precision,recall,no_predictions,no_truth\n"
          << assoc_sketch.algo << ',' << assoc_sketch.k << ',' << real(r.threshold) << ',' << r.runs
          << ',' << r.candidate_pairs << ',' << r.true_pairs << ',' << real(r.predicted_pairs) << ','
          << real(r.precision) << ',' << real(r.recall) << ',' << (r.no_predictions ? 1 : 0) << ','
          << (r.no_truth ? 1 : 0) << '\n';
      if (assoc_run.output.empty()) {
        out << csv.str();
      } else {
        std::ofstream file(assoc_run.output, std::ios::trunc);
        if (!(file << csv.str())) throw std::runtime_error("cannot write '" + assoc_run.output + "'");
      }
    } else if (bench_time->parsed()) {
      out << "method,k,n,update_ns,estimate_ns,update_ops_per_sec,estimate_ops_per_sec\n";
      for (auto k : parse_u64_list("--k-list", time_ks)) {
        auto cfg = time_sketch.config();
        cfg.k = static_cast<std::size_t>(k);
        const auto t = eval::timing_experiment(cfg, time_n, time_repeats);
        out << to_string(cfg.algorithm) << ',' << k << ',' << time_n << ',' << real(t.update_ns) << ','
            << real(t.estimate_ns) << ',' << real(t.update_ops_per_sec) << ',' << real(t.estimate_ops_per_sec) << '\n';
      }
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace maxlog::cli
