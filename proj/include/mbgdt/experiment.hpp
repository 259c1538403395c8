#ifndef MBGDT_EXPERIMENT_HPP_
#define MBGDT_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbgdt/bench.hpp"

namespace mbgdt {

struct ResolvedExperiment {
  Scenario scenario;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  std::string out;
};

/// Flat key=value experiment description. Every key has a shipped default;
/// unknown keys are rejected. Values are kept as text and parsed by resolve(),
/// so the echo in output headers is exactly what the user supplied.
class ExperimentConfig {
 public:
  ExperimentConfig();

  /// Throws ConfigError naming the key when it is unknown.
  void set(std::string_view key, std::string_view value);

  /// "key=value"; surrounding whitespace is ignored.
  void set_assignment(std::string_view assignment);

  /// Config file text: one key=value per line, '#' starts a comment.
  void parse(std::string_view text, std::string_view origin = "<config>");

  /// Throws IoError when unreadable, ConfigError on a bad line or key.
  void load_file(const std::filesystem::path& path);

  const std::string& get(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

  /// "# key=value" for every key except out, in canonical order, with "auto"
  /// replaced by its resolved value. Throws ConfigError like resolve().
  std::string header() const;

  /// Parses every value. Throws ConfigError on malformed or out-of-range
  /// values.
  ResolvedExperiment resolve() const;

  static bool is_known_key(std::string_view key) noexcept;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::vector<double> parse_real_list(std::string_view text);

/// %.17g, enough digits to round-trip a double.
std::string format_real(double v);

// ---------------------------------------------------------------------------
// CSV and text files. Every writer emits the given header (comment lines)
// first; readers skip lines starting with '#'.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kDatasetColumns = "x,y,is_contaminated";
inline constexpr std::string_view kTraceColumns = "iteration,mean_batch_loss";
inline constexpr std::string_view kSweepColumns =
    "param_value,mse_naive_mean,mse_naive_std,mse_trimmed_mean,mse_trimmed_std,trials,errors";
inline constexpr std::string_view kSummaryColumns = "experiment,mse_naive_mean,mse_trimmed_mean,ratio";
inline constexpr std::string_view kTrialColumns =
    "trial,seed,mse_naive,mse_trimmed,mse_trimmed_kernel,mse_trimmed_dbscan,converged_naive,"
    "converged_trimmed,error";

std::string dataset_csv(const Dataset& dataset, std::string_view header);
Dataset parse_dataset_csv(std::string_view text, std::string_view origin = "<csv>");

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

void write_dataset_csv(const std::filesystem::path& path, const Dataset& dataset,
                       std::string_view header);
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Coefficients one per line, ascending degree. The scale map goes in the
/// header as "# scale.center=" and "# scale.half_width=".
std::string weights_text(const FitResult& fit, std::string_view header);
std::pair<WeightVector, ScaleParams> parse_weights_text(std::string_view text);

std::string trace_csv(const TrainTrace& trace, std::string_view header);
std::string sweep_csv(const SweepTable& table, std::string_view header);
std::string trials_csv(const std::vector<TrialResult>& trials, std::string_view header);

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Writes <out_dir>/train.csv and <out_dir>/test.csv for trial seed `seed`.
void cmd_generate(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Fits the configured (trimmed) model to `train_path`, or to freshly
/// generated training data when absent. Writes <out_dir>/weights.txt and
/// <out_dir>/trace.csv.
FitResult cmd_fit(const ExperimentConfig& config, const std::optional<std::filesystem::path>& train_path,
                  const std::filesystem::path& out_dir);

SweepTable cmd_sweep(const ExperimentConfig& config, SweepParam param, std::span<const double> grid,
                     const std::filesystem::path& out_path, unsigned threads = 0);

struct ExperimentOutcome {
  std::string name;
  ExperimentConfig config;
  std::optional<RepeatedRun> run;
  std::string error;  // set when every trial failed
};

struct SweepOutcome {
  std::string name;
  ExperimentConfig config;
  SweepParam param = SweepParam::Epsilon;
  std::vector<double> grid;
  std::optional<SweepTable> table;
  std::string error;
};

struct SummaryRow {
  std::string experiment;
  double mse_naive_mean = 0.0;
  double mse_trimmed_mean = 0.0;
  double ratio = 0.0;
};

struct ReproduceReport {
  std::vector<ExperimentOutcome> experiments;
  std::vector<SweepOutcome> sweeps;
  std::vector<SummaryRow> summary;

  const ExperimentOutcome* experiment(std::string_view name) const;
  const SweepOutcome* find_sweep(std::string_view name) const;
  bool any_failed() const;
};

/// The shipped experiment set, each one `base` plus a few overrides.
std::vector<ExperimentOutcome> reproduction_experiments(const ExperimentConfig& base);
std::vector<SweepOutcome> reproduction_sweeps(const ExperimentConfig& base);

/// Called after each experiment or sweep with its name and wall time.
using ReproduceProgress = std::function<void(std::string_view name, double seconds)>;

/// Runs everything in memory.
ReproduceReport run_reproduction(const ExperimentConfig& base, unsigned threads = 0,
                                 const ReproduceProgress& progress = {});

/// One <name>.csv per experiment and sweep plus summary.csv.
void write_reproduction(const ReproduceReport& report, const ExperimentConfig& base,
                        const std::filesystem::path& out_dir);

}  // namespace mbgdt

#endif  // MBGDT_EXPERIMENT_HPP_
