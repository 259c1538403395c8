#include "mbgdt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "mbgdt/error.hpp"

namespace mbgdt {

double mse(const WeightVector& w, const ScaleParams& scale, const Dataset& test) {
  if (test.empty()) throw InvalidInput("mse: empty test set");
  double sum = 0.0;
  for (const Sample& s : test.samples()) {
    const double r = predict(w, scale.apply(s.x)) - s.y;
    sum += r * r;
  }
  return sum / static_cast<double>(test.size());
}

ModelConfig Scenario::trimmed_config() const {
  ModelConfig cfg = model;
  cfg.trim_fraction = trim_fraction.value_or(
      contamination.family == ContaminationFamily::None ? 0.0 : contamination.epsilon);
  return cfg;
}

std::uint64_t model_seed(std::uint64_t trial_seed) noexcept { return derive_seed(trial_seed, 3); }

TrialData make_trial_data(const Scenario& scenario, std::uint64_t seed) {
  Rng train_rng(derive_seed(seed, 1));
  Rng test_rng(derive_seed(seed, 2));
  TrialData data;
  Dataset clean = scenario.nonuniform
                      ? gen_nonuniform(scenario.n_train, scenario.curve, *scenario.nonuniform,
                                       train_rng)
                      : gen_true(scenario.n_train, scenario.curve, train_rng);
  data.train = contaminate(clean, scenario.contamination, scenario.curve, train_rng);
  data.test = gen_test(scenario.n_test, scenario.curve, test_rng);
  return data;
}

namespace {

ArmResult run_arm(const Dataset& train, const Dataset& test, const ModelConfig& cfg) {
  ArmResult arm;
  try {
    const FitResult f = fit(train, cfg);
    arm.mse = mse(f.weights, f.scale, test);
    arm.converged = f.trace.converged;
    arm.iterations = f.trace.iterations_run;
    if (!std::isfinite(arm.mse)) arm.error = "non-finite test mse";
  } catch (const std::exception& e) {
    arm.error = e.what();
    if (arm.error.empty()) arm.error = "fit failed";
  }
  return arm;
}

}  // namespace

TrialResult run_trial(const Scenario& scenario, std::uint64_t seed) {
  const TrialData data = make_trial_data(scenario, seed);
  ModelConfig trimmed = scenario.trimmed_config();
  trimmed.seed = model_seed(seed);

  TrialResult r;
  r.seed = seed;
  r.naive = run_arm(data.train, data.test, naive_config(trimmed));
  r.trimmed = run_arm(data.train, data.test, trimmed);
  if (scenario.kernel) {
    const KernelSettings& k = *scenario.kernel;
    try {
      const KernelConfig cfg =
          kernel_config_for(data.train, k.width_fraction_x, k.width_fraction_y,
                            k.stride_fraction, k.threshold_fraction, k.strict_mode);
      r.trimmed_kernel = run_arm(kernel_preprocess(data.train, cfg), data.test, trimmed);
    } catch (const std::exception& e) {
      r.trimmed_kernel = ArmResult{0.0, false, 0, e.what()};
    }
  }
  if (scenario.dbscan) {
    try {
      r.trimmed_dbscan = run_arm(dbscan_trim(data.train, *scenario.dbscan), data.test, trimmed);
    } catch (const std::exception& e) {
      r.trimmed_dbscan = ArmResult{0.0, false, 0, e.what()};
    }
  }
  return r;
}

ColumnStats summarize(std::span<const double> values) {
  ColumnStats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - s.mean) * (v[i] - s.mean);
    std::sort(dev.begin(), dev.end());
    double ss = 0.0;
    for (double d : dev) ss += d;
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

Aggregate aggregate(std::span<const TrialResult> results) {
  Aggregate a;
  a.trials = results.size();
  std::vector<double> naive, trimmed, kernel, dbscan;
  bool has_kernel = false;
  bool has_dbscan = false;
  for (const TrialResult& r : results) {
    if (r.naive.ok() && r.trimmed.ok()) {
      naive.push_back(r.naive.mse);
      trimmed.push_back(r.trimmed.mse);
    } else {
      ++a.errors;
    }
    if (r.trimmed_kernel) {
      has_kernel = true;
      if (r.trimmed_kernel->ok()) kernel.push_back(r.trimmed_kernel->mse);
      else ++a.kernel_errors;
    }
    if (r.trimmed_dbscan) {
      has_dbscan = true;
      if (r.trimmed_dbscan->ok()) dbscan.push_back(r.trimmed_dbscan->mse);
      else ++a.dbscan_errors;
    }
  }
  a.naive = summarize(naive);
  a.trimmed = summarize(trimmed);
  if (has_kernel) a.trimmed_kernel = summarize(kernel);
  if (has_dbscan) a.trimmed_dbscan = summarize(dbscan);
  return a;
}

namespace {

std::vector<TrialResult> run_trials(const Scenario& scenario, std::size_t trials,
                                    std::uint64_t master_seed, unsigned threads) {
  std::vector<TrialResult> out(trials);
  const unsigned workers = std::min<std::size_t>(threads, trials);
  if (workers <= 1) {
    for (std::size_t i = 0; i < trials; ++i) out[i] = run_trial(scenario, master_seed + i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = next++; i < trials && !failed; i = next++) {
        try {
          out[i] = run_trial(scenario, master_seed + i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

RepeatedRun run_repeated(const Scenario& scenario, std::size_t trials, std::uint64_t master_seed,
                         unsigned threads) {
  if (trials == 0) throw InvalidInput("run_repeated: trials must be positive");
  RepeatedRun run;
  run.trials = run_trials(scenario, trials, master_seed, threads);
  run.summary = aggregate(run.trials);
  if (run.summary.errors == trials) {
    throw ExperimentFailed("all " + std::to_string(trials) +
                             " trials failed; first error: " +
                             (run.trials[0].naive.ok() ? run.trials[0].trimmed.error
                                                       : run.trials[0].naive.error));
  }
  return run;
}

std::string_view to_string(SweepParam p) noexcept {
  switch (p) {
    case SweepParam::Epsilon: return "epsilon";
    case SweepParam::DistanceX: return "distance-x";
    case SweepParam::DistanceY: return "distance-y";
  }
  return "epsilon";
}

std::optional<SweepParam> parse_sweep_param(std::string_view name) noexcept {
  if (name == "epsilon") return SweepParam::Epsilon;
  if (name == "distance-x") return SweepParam::DistanceX;
  if (name == "distance-y") return SweepParam::DistanceY;
  return std::nullopt;
}

Scenario apply_sweep_value(const Scenario& scenario, SweepParam param, double value) {
  Scenario s = scenario;
  switch (param) {
    case SweepParam::Epsilon: s.contamination.epsilon = value; break;
    case SweepParam::DistanceX: s.contamination.offset_x_ratio = value; break;
    case SweepParam::DistanceY: s.contamination.offset_y_ratio = value; break;
  }
  return s;
}

SweepTable sweep(const Scenario& scenario, SweepParam param, std::span<const double> grid,
                 std::size_t trials, std::uint64_t master_seed, unsigned threads) {
  if (grid.empty()) throw InvalidInput("sweep: empty grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidInput("sweep: grid must ascend");
  if (trials == 0) throw InvalidInput("sweep: trials must be positive");
  SweepTable table;
  table.param = param;
  for (double v : grid) {
    const Scenario s = apply_sweep_value(scenario, param, v);
    s.contamination.validate();
    const std::vector<TrialResult> results = run_trials(s, trials, master_seed, threads);
    table.rows.push_back({v, aggregate(results)});
  }
  return table;
}

}  // namespace mbgdt
