#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mbgdt/error.hpp"
#include "mbgdt/experiment.hpp"

namespace mbgdt {

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::string command_header(std::string_view command, const ExperimentConfig& config) {
  return "# mbgdt " + std::string(command) + "\n" + config.header();
}

std::string sweep_header(const ExperimentConfig& config, SweepParam param) {
  const ResolvedExperiment r = config.resolve();
  std::string h = command_header("sweep", config);
  h += "# sweep.param=" + std::string(to_string(param)) + "\n";
  h += "# sweep.family=" + std::string(to_string(r.scenario.contamination.family)) + "\n";
  h += std::string("# sweep.trim=") +
       (r.scenario.trim_fraction ? format_real(*r.scenario.trim_fraction)
                                 : std::string("matched to epsilon")) +
       "\n";
  return h;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void cmd_generate(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  const ResolvedExperiment r = config.resolve();
  const TrialData data = make_trial_data(r.scenario, r.seed);
  ensure_dir(out_dir);
  const std::string header = command_header("generate", config);
  write_dataset_csv(out_dir / "train.csv", data.train, header);
  write_dataset_csv(out_dir / "test.csv", data.test, header);
}

FitResult cmd_fit(const ExperimentConfig& config,
                  const std::optional<std::filesystem::path>& train_path,
                  const std::filesystem::path& out_dir) {
  const ResolvedExperiment r = config.resolve();
  const Dataset train = train_path ? read_dataset_csv(*train_path)
                                   : make_trial_data(r.scenario, r.seed).train;
  ModelConfig model = r.scenario.trimmed_config();
  model.seed = model_seed(r.seed);
  const FitResult f = fit(train, model);

  ensure_dir(out_dir);
  std::string header = command_header("fit", config);
  header += "# fit.trim_fraction=" + format_real(model.trim_fraction) + "\n";
  if (train_path) header += "# fit.train=" + train_path->string() + "\n";
  write_text_file(out_dir / "weights.txt", weights_text(f, header));
  write_text_file(out_dir / "trace.csv", trace_csv(f.trace, header));
  return f;
}

SweepTable cmd_sweep(const ExperimentConfig& config, SweepParam param, std::span<const double> grid,
                     const std::filesystem::path& out_path, unsigned threads) {
  const ResolvedExperiment r = config.resolve();
  for (double v : grid) {
    try {
      apply_sweep_value(r.scenario, param, v).contamination.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError("grid value " + format_real(v) + ": " + e.what());
    }
  }
  SweepTable table = sweep(r.scenario, param, grid, r.trials, r.seed, threads);
  if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());
  write_text_file(out_path, sweep_csv(table, sweep_header(config, param)));
  return table;
}

// ---------------------------------------------------------------------------

const ExperimentOutcome* ReproduceReport::experiment(std::string_view name) const {
  for (const auto& e : experiments) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const SweepOutcome* ReproduceReport::find_sweep(std::string_view name) const {
  for (const auto& s : sweeps) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

bool ReproduceReport::any_failed() const {
  for (const auto& e : experiments) {
    if (!e.run) return true;
  }
  for (const auto& s : sweeps) {
    if (!s.table) return true;
  }
  return false;
}

std::vector<ExperimentOutcome> reproduction_experiments(const ExperimentConfig& base) {
  struct Plan {
    const char* name;
    const char* family;
    const char* nonuniform;
    bool noiseless;
    bool preprocessors;
  };
  static constexpr Plan kPlans[] = {
      {"no_contamination", "none", "none", false, false},
      {"no_contamination_noiseless", "none", "none", true, false},
      {"random", "random", "none", false, false},
      {"parallel_line", "parallel-line", "none", false, false},
      {"edge_corner", "edge-corner", "none", false, true},
      {"begin", "begin", "none", false, false},
      {"middle", "middle", "none", false, false},
      {"end", "end", "none", false, false},
      {"nonuniform_dense", "none", "dense", false, false},
      {"nonuniform_incomplete", "none", "incomplete", false, false},
  };
  std::vector<ExperimentOutcome> out;
  for (const Plan& p : kPlans) {
    ExperimentConfig c = base;
    c.set("contamination.family", p.family);
    c.set("contamination.epsilon", std::string_view(p.family) == "none" ? "0" : "0.49");
    c.set("nonuniform.case", p.nonuniform);
    if (p.noiseless) c.set("curve.noise_sigma", "0");
    if (p.preprocessors) {
      c.set("kernel.enabled", "true");
      c.set("dbscan.enabled", "true");
    }
    out.push_back({p.name, c, std::nullopt, {}});
  }
  return out;
}

std::vector<SweepOutcome> reproduction_sweeps(const ExperimentConfig& base) {
  ExperimentConfig edge = base;
  edge.set("contamination.family", "edge-corner");
  edge.set("contamination.epsilon", "0.49");
  edge.set("nonuniform.case", "none");
  const std::vector<double> eps{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45};
  const std::vector<double> dist{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  return {
      {"sweep_epsilon", edge, SweepParam::Epsilon, eps, std::nullopt, {}},
      {"sweep_distance_x", edge, SweepParam::DistanceX, dist, std::nullopt, {}},
      {"sweep_distance_y", edge, SweepParam::DistanceY, dist, std::nullopt, {}},
  };
}

ReproduceReport run_reproduction(const ExperimentConfig& base, unsigned threads,
                                 const ReproduceProgress& progress) {
  using Clock = std::chrono::steady_clock;
  const auto report_time = [&](const std::string& name, Clock::time_point start) {
    if (progress) progress(name, std::chrono::duration<double>(Clock::now() - start).count());
  };
  ReproduceReport report;
  report.experiments = reproduction_experiments(base);
  for (ExperimentOutcome& e : report.experiments) {
    const auto start = Clock::now();
    const ResolvedExperiment r = e.config.resolve();
    try {
      e.run = run_repeated(r.scenario, r.trials, r.seed, threads);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    SummaryRow row{e.name, kNaN, kNaN, kNaN};
    if (e.run) {
      row.mse_naive_mean = e.run->summary.naive.mean;
      row.mse_trimmed_mean = e.run->summary.trimmed.mean;
      row.ratio = row.mse_trimmed_mean / row.mse_naive_mean;
    }
    report.summary.push_back(row);
    if (e.run) {
      const auto extra = [&](const char* suffix, const std::optional<ColumnStats>& col) {
        if (!col) return;
        const double m = col->count > 0 ? col->mean : kNaN;
        report.summary.push_back({e.name + suffix, row.mse_naive_mean, m, m / row.mse_naive_mean});
      };
      extra("+kernel", e.run->summary.trimmed_kernel);
      extra("+dbscan", e.run->summary.trimmed_dbscan);
    }
    report_time(e.name, start);
  }
  report.sweeps = reproduction_sweeps(base);
  for (SweepOutcome& s : report.sweeps) {
    const auto start = Clock::now();
    const ResolvedExperiment r = s.config.resolve();
    try {
      s.table = sweep(r.scenario, s.param, s.grid, r.trials, r.seed, threads);
    } catch (const std::exception& ex) {
      s.error = ex.what();
    }
    report_time(s.name, start);
  }
  return report;
}

void write_reproduction(const ReproduceReport& report, const ExperimentConfig& base,
                        const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  for (const ExperimentOutcome& e : report.experiments) {
    std::string header = command_header("reproduce", e.config);
    header += "# experiment=" + e.name + "\n";
    if (!e.run) header += "# error=" + e.error + "\n";
    write_text_file(out_dir / (e.name + ".csv"),
                    trials_csv(e.run ? e.run->trials : std::vector<TrialResult>{}, header));
  }
  for (const SweepOutcome& s : report.sweeps) {
    std::string header = sweep_header(s.config, s.param);
    header += "# experiment=" + s.name + "\n";
    if (!s.table) header += "# error=" + s.error + "\n";
    write_text_file(out_dir / (s.name + ".csv"),
                    sweep_csv(s.table ? *s.table : SweepTable{s.param, {}}, header));
  }
  std::string summary = command_header("reproduce", base);
  summary += kSummaryColumns;
  summary += '\n';
  for (const SummaryRow& row : report.summary) {
    summary += row.experiment + "," + format_real(row.mse_naive_mean) + "," +
               format_real(row.mse_trimmed_mean) + "," + format_real(row.ratio) + "\n";
  }
  write_text_file(out_dir / "summary.csv", summary);
}

}  // namespace mbgdt
