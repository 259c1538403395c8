#ifndef MBGDT_BENCH_HPP_
#define MBGDT_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mbgdt/datagen.hpp"
#include "mbgdt/optimizer.hpp"
#include "mbgdt/preprocess.hpp"

namespace mbgdt {

/// Mean of (predict(w, scale(x)) - y)^2 over the test set. Throws InvalidInput
/// on an empty test set.
double mse(const WeightVector& w, const ScaleParams& scale, const Dataset& test);

/// Kernel preprocessor settings relative to the training data's ranges.
struct KernelSettings {
  double width_fraction_x = 0.1;
  double width_fraction_y = 0.1;
  double stride_fraction = 0.5;
  double threshold_fraction = 0.1;
  bool strict_mode = false;

  friend bool operator==(const KernelSettings&, const KernelSettings&) = default;
};

/// One experiment: how the training data is generated and how the models are
/// configured. `model` is the trimmed arm; the naive arm is naive_config(model).
struct Scenario {
  TrueCurve curve;
  std::size_t n_train = 200;
  std::size_t n_test = 500;
  ContaminationSpec contamination;
  std::optional<NonUniformSpec> nonuniform;
  ModelConfig model;
  // Unset: the trimmed arm trims the contamination rate.
  std::optional<double> trim_fraction;
  std::optional<KernelSettings> kernel;
  std::optional<DbscanConfig> dbscan;

  ModelConfig trimmed_config() const;
};

struct TrialData {
  Dataset train;
  Dataset test;
};

/// Training and test data for one trial; identical for identical seeds.
TrialData make_trial_data(const Scenario& scenario, std::uint64_t seed);

/// Seed handed to the optimizer for a trial seed.
std::uint64_t model_seed(std::uint64_t trial_seed) noexcept;

struct ArmResult {
  double mse = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::string error;  // non-empty when the arm failed

  bool ok() const noexcept { return error.empty(); }
  friend bool operator==(const ArmResult&, const ArmResult&) = default;
};

struct TrialResult {
  std::uint64_t seed = 0;
  ArmResult naive;
  ArmResult trimmed;
  std::optional<ArmResult> trimmed_kernel;
  std::optional<ArmResult> trimmed_dbscan;

  double mse_naive() const noexcept { return naive.mse; }
  double mse_trimmed() const noexcept { return trimmed.mse; }

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// Generates data, applies the configured preprocessors to independent copies
/// of the training set, fits the naive and trimmed models (preprocessed sets
/// are fitted with the trimmed configuration only) and scores every arm on the
/// clean test set. Fit failures are recorded per arm.
TrialResult run_trial(const Scenario& scenario, std::uint64_t seed);

struct ColumnStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for fewer than 2 values
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;

  friend bool operator==(const ColumnStats&, const ColumnStats&) = default;
};

/// Order-independent summary of values (they are sorted before summation).
ColumnStats summarize(std::span<const double> values);

struct Aggregate {
  std::size_t trials = 0;      // requested
  std::size_t errors = 0;      // trials whose naive or trimmed arm failed
  ColumnStats naive;           // over trials where both main arms succeeded
  ColumnStats trimmed;
  std::optional<ColumnStats> trimmed_kernel;
  std::optional<ColumnStats> trimmed_dbscan;
  std::size_t kernel_errors = 0;
  std::size_t dbscan_errors = 0;

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

Aggregate aggregate(std::span<const TrialResult> results);

struct RepeatedRun {
  std::vector<TrialResult> trials;
  Aggregate summary;
};

/// Trial i uses seed master_seed + i. `threads` > 1 runs trials concurrently;
/// the result does not depend on it. Throws std::runtime_error when every
/// trial failed.
RepeatedRun run_repeated(const Scenario& scenario, std::size_t trials,
                         std::uint64_t master_seed, unsigned threads = 0);

enum class SweepParam { Epsilon, DistanceX, DistanceY };

std::string_view to_string(SweepParam p) noexcept;
std::optional<SweepParam> parse_sweep_param(std::string_view name) noexcept;

/// The scenario with the swept parameter set to `value`. For Epsilon the
/// trimmed arm trims `value` unless the template pins a trim fraction.
Scenario apply_sweep_value(const Scenario& scenario, SweepParam param, double value);

struct SweepRow {
  double value = 0.0;
  Aggregate summary;
};

struct SweepTable {
  SweepParam param = SweepParam::Epsilon;
  std::vector<SweepRow> rows;
};

/// One run_repeated per grid value, rows in grid order. The grid must be
/// non-empty and ascending. Rows where every trial failed are kept with
/// errors == trials.
SweepTable sweep(const Scenario& scenario, SweepParam param, std::span<const double> grid,
                 std::size_t trials, std::uint64_t master_seed, unsigned threads = 0);

}  // namespace mbgdt

#endif  // MBGDT_BENCH_HPP_
